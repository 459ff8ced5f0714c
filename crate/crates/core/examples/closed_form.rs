//! Exact stationary distribution of the five-coefficient family and its moments.
//!
//! `cargo run --example closed_form -- 1 0.5 0 1` takes `ν s σ r`.

use twophoton::gf::{factorial_moment, gf_eval, mandel_q};
use twophoton::{choose_truncation, closed_form, photon_probabilities, DimensionlessParams};

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let [nu, s, sigma, r] = match args.as_slice() {
        [a, b, c, d] => [*a, *b, *c, *d],
        _ => [1.0, 0.5, 0.0, 1.0],
    };
    let p = DimensionlessParams::new(nu, s, sigma, r).unwrap();
    let cf = closed_form(p).unwrap();
    println!("nu={nu} s={s} sigma={sigma} r={r}");
    println!("R={:.12} h={:.12} a={:.12} c={:.12}", cf.R, cf.h, cf.a, cf.c);

    let nmax = choose_truncation(&p, 1e-12);
    let d = photon_probabilities(&cf, nmax).unwrap();
    for (n, pn) in d.probs.iter().enumerate().take(12) {
        println!("p_{n:<2} = {pn:.15e}");
    }
    println!("nmax={nmax}  sum={:.15}  tail<={:.1e}", d.total(), d.tail_bound);
    println!("F(1/2) = {:.15}", gf_eval(&cf, 0.5).unwrap());
    println!("mean={:.12}  N2={:.12}  Q={:+.12}", factorial_moment(&cf, 1).unwrap(), factorial_moment(&cf, 2).unwrap(), mandel_q(&cf).unwrap());
}
