//! Truncated master-equation steady state, by direct solve and by time evolution.

use twophoton::steady::{evolve_to_steady, EvolveOptions};
use twophoton::{choose_truncation, closed_form, photon_probabilities, steady_state, DimensionlessParams, GeneratorMatrix, PhotonDistribution};

fn main() {
    let p = DimensionlessParams::new(0.1, 2.0, 1.0, 5.0).unwrap();
    let nmax = choose_truncation(&p, 1e-12);
    let g = GeneratorMatrix::from_rates(&p, nmax).unwrap();
    println!("nmax={nmax} bandwidth={} max exit rate={:.3}", g.bandwidth(), g.max_exit_rate());

    let direct = steady_state(&g, None).unwrap();
    let evolved = evolve_to_steady(&g, &PhotonDistribution::vacuum(nmax), 1e-11, EvolveOptions::default()).unwrap();
    let exact = photon_probabilities(&closed_form(p).unwrap(), nmax).unwrap();
    println!("nullspace residual {:.2e}", direct.residual);
    println!("evolve    residual {:.2e}", evolved.residual);
    println!("|nullspace - closed form| = {:.2e}", direct.distribution.sup_distance(&exact));
    println!("|evolve - closed form|    = {:.2e}", evolved.distribution.sup_distance(&exact));

    // two-photon processes alone keep parity; the odd weight must be supplied
    let q = DimensionlessParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
    let g = GeneratorMatrix::from_rates(&q, 40).unwrap();
    println!("nu=0 without weight: {}", steady_state(&g, None).unwrap_err());
    let mixed = steady_state(&g, Some(0.3)).unwrap();
    println!("nu=0, weight 0.3: p0={:.12} p1={:.12} odd mass={:.12}", mixed.distribution.get(0), mixed.distribution.get(1), mixed.distribution.odd_mass());
}
