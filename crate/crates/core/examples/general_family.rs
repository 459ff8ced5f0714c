//! The six-coefficient family with a saturated emission channel, read from JSON. No closed
//! form exists here; only the oracle applies.

use twophoton::{choose_truncation, steady_state, FamilyRates, GeneratorMatrix};

const CONFIG: &str = r#"{
    "d1a": 1.0, "d2a": 0.5, "d1e": 0.4, "d2e": 2.0, "d10a": 0.2, "d12a": 0.1,
    "w1e": [{"j": 2, "w": 0.05}],
    "saturated": [{"k": 2, "d": 3.0, "gamma": 0.2}]
}"#;

fn main() {
    let rates: FamilyRates = serde_json::from_str(CONFIG).unwrap();
    rates.validate().unwrap();
    let nmax = choose_truncation(&rates, 1e-12);
    let g = GeneratorMatrix::from_rates(&rates, nmax).unwrap();
    let worst_col = g.column_sums().iter().fold(0.0f64, |m, s| m.max(s.abs()));
    println!("nmax={nmax}  max |column sum|={worst_col:.1e}");
    let rep = steady_state(&g, None).unwrap();
    let d = &rep.distribution;
    println!("residual={:.1e} mean={:.10} Q={:+.10}", rep.residual, d.mean(), d.mandel_q().unwrap());
    for n in 0..8 {
        println!("p_{n} = {:.12e}", d.get(n));
    }
}
