//! Negative-binomial limit at large ν and the exact no-two-photon-absorption branch.

use twophoton::gf::{negbin_limit, no_two_photon_absorption, No2aForm};
use twophoton::{choose_truncation, closed_form, photon_probabilities, DimensionlessParams};

fn main() {
    for sigma in [0.0, 1.0] {
        let nb = negbin_limit(0.5, sigma).unwrap();
        println!("negbin s=0.5 sigma={sigma}: exponent={} mean={:.12} Q={:.12}", nb.alpha(), nb.mean(), nb.mandel_q());
        for nu in [1e2, 1e3, 1e4] {
            let p = DimensionlessParams::new(nu, 0.5, sigma, 1.0).unwrap();
            let nmax = choose_truncation(&p, 1e-12);
            let tv = photon_probabilities(&closed_form(p).unwrap(), nmax).unwrap().total_variation(&nb.probabilities(nmax));
            println!("  nu={nu:<6} total variation to limit {tv:.3e}");
        }
    }

    let l = no_two_photon_absorption(No2aForm { rho: 1.0, s: 0.5, sigma: 0.0 }).unwrap();
    let d = l.probabilities(200);
    println!("no two-photon absorption, rho=1 s=0.5: gamma={} mean={:.12} from table {:.12}", l.gamma, l.mean(), d.mean());
    println!("F(0.5)={:.12}  p0..p3 = {:.6e} {:.6e} {:.6e} {:.6e}", l.gf(0.5), d.get(0), d.get(1), d.get(2), d.get(3));
}
