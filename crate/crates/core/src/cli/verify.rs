//! Consistency sweeps behind `twophoton verify`: every closed form against the oracle or
//! an independent route, with the largest deviation reported per check.

use super::report::{CheckOut, Num, VerifyReport};
use crate::distribution::PhotonDistribution;
use crate::gf::{
    closed_form, negbin_limit, no_two_photon_absorption, paeos_limit, paeos_mandel_q, paeos_mandel_q_weak,
    paeos_probabilities, paeos_threshold, photon_probabilities, No2aForm, PaeosLimit, PaeosParams,
};
use crate::rates::{DimensionlessParams, FamilyRates, GeneratorMatrix, Parity, RawRates};
use crate::steady::{choose_truncation, evolve_to_steady, steady_state, EvolveOptions};
use crate::wigner::{
    phase_average, purity_paeos, radial_normalization, wigner_mixture_radial, wigner_paeos_radial, PHASE_NODES,
};

struct Sweep {
    checks: Vec<CheckOut>,
}

impl Sweep {
    /// Records a check; any error inside counts as an infinite deviation.
    fn check(&mut self, name: &str, tol: f64, f: impl FnOnce() -> Result<f64, String>) {
        let dev = f().unwrap_or(f64::INFINITY);
        let dev = if dev.is_nan() { f64::INFINITY } else { dev };
        self.checks.push(CheckOut { name: name.to_string(), max_deviation: Num(dev), tolerance: Num(tol), pass: dev <= tol });
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn oracle(p: &impl crate::rates::RateFunctions, nmax: usize, beta: Option<f64>) -> Result<PhotonDistribution, String> {
    let g = GeneratorMatrix::from_rates(p, nmax).map_err(err)?;
    Ok(steady_state(&g, beta).map_err(err)?.distribution)
}

fn closed(p: DimensionlessParams, nmax: usize) -> Result<PhotonDistribution, String> {
    photon_probabilities(&closed_form(p).map_err(err)?, nmax).map_err(err)
}

fn paeos_mixture(p: DimensionlessParams) -> Result<PaeosParams, String> {
    match paeos_limit(p).map_err(err)? {
        PaeosLimit::Mixture(m) => Ok(m),
        PaeosLimit::Vacuum => Err("vacuum".into()),
    }
}

/// Runs all sweeps. `perturb` scales `r` on the closed-form side only, so any nonzero
/// value large enough to matter must make the cross-checks fail.
pub fn run_checks(quick: bool, perturb: f64) -> VerifyReport {
    let mut sw = Sweep { checks: Vec::new() };
    let (nus, ss, sigmas, rs): (&[f64], &[f64], &[f64], &[f64]) = if quick {
        (&[1.0], &[0.0, 2.0], &[1.0], &[0.5, 2.0])
    } else {
        (&[0.1, 1.0, 10.0], &[0.0, 0.5, 2.0], &[0.0, 1.0], &[0.5, 2.0, 5.0])
    };
    let mut grid = Vec::new();
    for &nu in nus {
        for &s in ss {
            for &sigma in sigmas {
                for &r in rs {
                    grid.push(DimensionlessParams { nu, s, sigma, r });
                }
            }
        }
    }

    sw.check("closed_form_vs_oracle", 1e-8, || {
        let mut worst = 0.0f64;
        for &p in &grid {
            let nmax = choose_truncation(&p, 1e-12);
            let cp = DimensionlessParams { r: p.r * (1.0 + perturb), ..p };
            worst = worst.max(closed(cp, nmax)?.sup_distance(&oracle(&p, nmax, None)?));
        }
        Ok(worst)
    });

    sw.check("closed_form_normalization", 1e-10, || {
        let mut worst = 0.0f64;
        for &p in &grid {
            let d = closed(p, choose_truncation(&p, 1e-12))?;
            worst = worst.max((d.total() + d.tail_bound - 1.0).abs());
        }
        Ok(worst)
    });

    let weak: &[(f64, f64, f64)] = if quick { &[(0.5, 1.0, 2.0)] } else { &[(0.0, 0.0, 1.0), (0.5, 1.0, 2.0), (2.0, 0.0, 0.5)] };
    sw.check("small_nu_paeos_limit_tv", 1e-3, || {
        let mut worst = 0.0f64;
        for &(s, sigma, r) in weak {
            let p = DimensionlessParams { nu: 1e-4, s, sigma, r };
            let nmax = choose_truncation(&p, 1e-12);
            let mix = paeos_probabilities(&paeos_mixture(p)?, nmax).map_err(err)?;
            worst = worst.max(closed(p, nmax)?.total_variation(&mix));
        }
        Ok(worst)
    });

    sw.check("large_nu_negbin_limit_tv", 1e-3, || {
        let mut worst = 0.0f64;
        for &sigma in &[0.0, 1.0] {
            let p = DimensionlessParams { nu: 1e4, s: 0.5, sigma, r: 1.0 };
            let nmax = choose_truncation(&p, 1e-12);
            let nb = negbin_limit(0.5, sigma).map_err(err)?.probabilities(nmax);
            worst = worst.max(closed(p, nmax)?.total_variation(&nb));
        }
        Ok(worst)
    });

    sw.check("mandel_q_threshold", 1e-12, || {
        let mut worst = 0.0f64;
        for &r in &[0.1, 1.0, 5.0, 10.0] {
            let p = PaeosParams::new(paeos_threshold(r), r).map_err(err)?;
            worst = worst.max(paeos_mandel_q(&p).map_err(err)?.abs());
        }
        Ok(worst)
    });

    sw.check("mandel_q_weak_sign_and_bound", 0.0, || {
        let n = if quick { 20 } else { 60 };
        let mut violations = 0.0;
        for i in 1..=n {
            for j in 0..=n {
                let r = 0.05 + 5.0 * i as f64 / n as f64;
                let s = 5.0 * j as f64 / n as f64;
                let q = paeos_mandel_q_weak(r, s).map_err(err)?;
                let sign_ok = if r > s { q > 0.0 } else if r < s { q < 0.0 } else { q == 0.0 };
                if !sign_ok || q.abs() >= 0.5 {
                    violations += 1.0;
                }
            }
        }
        Ok(violations)
    });

    let wig_rs: &[f64] = if quick { &[1.0] } else { &[1.0, 5.0, 10.0] };
    let xs: Vec<f64> = (0..=if quick { 16 } else { 80 }).map(|i| 8.0 * i as f64 / if quick { 16.0 } else { 80.0 }).collect();
    sw.check("wigner_routes_agree", 1e-6, || {
        let mut worst = 0.0f64;
        for &r in wig_rs {
            for (beta, sign) in [(0.0, Parity::Even), (1.0, Parity::Odd)] {
                let p = PaeosParams::new(beta, r).map_err(err)?;
                let probs = paeos_probabilities(&p, choose_truncation(&DimensionlessParams { nu: 0.0, s: 0.0, sigma: 0.0, r }, 1e-14)).map_err(err)?;
                for &x in &xs {
                    let closed = wigner_paeos_radial(&p, x);
                    let sum = wigner_mixture_radial(&probs, x);
                    let avg = phase_average(r, sign, x, 0.0, PHASE_NODES).map_err(err)?;
                    worst = worst.max((closed - sum).abs()).max((closed - avg).abs()).max((sum - avg).abs());
                }
            }
        }
        Ok(worst)
    });

    sw.check("wigner_origin", 1e-12, || {
        let mut worst = 0.0f64;
        for &r in &[0.1, 1.0, 5.0, 10.0] {
            for &beta in &[0.0, 0.3, 0.5, 1.0] {
                let w = wigner_paeos_radial(&PaeosParams::new(beta, r).map_err(err)?, 0.0);
                worst = worst.max((w - 2.0 * (1.0 - 2.0 * beta)).abs());
            }
        }
        Ok(worst)
    });

    sw.check("wigner_radial_normalization", 1e-6, || {
        let mut worst = 0.0f64;
        for &r in wig_rs {
            for &beta in &[0.0, 0.5, 1.0] {
                let p = PaeosParams::new(beta, r).map_err(err)?;
                let xmax = (2.0 * r).sqrt() + 10.0;
                worst = worst.max((radial_normalization(|x| wigner_paeos_radial(&p, x), xmax, 4000) - 1.0).abs());
            }
        }
        Ok(worst)
    });

    sw.check("purity_closed_form_vs_series", 1e-10, || {
        let mut worst = 0.0f64;
        for &r in &[0.1, 1.0, 5.0, 10.0, 20.0] {
            for &beta in &[0.0, 0.3, 0.5, 1.0] {
                let p = PaeosParams::new(beta, r).map_err(err)?;
                let d = paeos_probabilities(&p, 200).map_err(err)?;
                worst = worst.max((purity_paeos(&p) - d.purity()).abs());
            }
        }
        Ok(worst)
    });

    sw.check("parity_conserving_evolution", 1e-8, || {
        let p = DimensionlessParams { nu: 0.0, s: 0.0, sigma: 0.0, r: 1.0 };
        let nmax = 40;
        let g = GeneratorMatrix::from_rates(&p, nmax).map_err(err)?;
        let rep = evolve_to_steady(&g, &PhotonDistribution::fock(1, nmax), 1e-12, EvolveOptions::default()).map_err(err)?;
        let odd = paeos_probabilities(&PaeosParams::new(1.0, 1.0).map_err(err)?, nmax).map_err(err)?;
        let mixed = steady_state(&g, Some(0.3)).map_err(err)?.distribution;
        let even = steady_state(&g, Some(0.0)).map_err(err)?.distribution;
        let odd_sector = steady_state(&g, Some(1.0)).map_err(err)?.distribution;
        Ok(rep
            .distribution
            .sup_distance(&odd)
            .max((rep.distribution.odd_mass() - 1.0).abs())
            .max(mixed.sup_distance(&even.mix(&odd_sector, 0.3))))
    });

    sw.check("no_two_photon_absorption_vs_oracle", 1e-8, || {
        let mut worst = 0.0f64;
        for &(rho, s, sigma) in &[(1.0, 0.5, 0.0), (0.3, 0.4, 0.2)] {
            let rates = FamilyRates::from(RawRates { d1a: 1.0, d1e: s, d11e: sigma, d2e: rho, ..RawRates::default() });
            let nmax = choose_truncation(&rates, 1e-12);
            let l = no_two_photon_absorption(No2aForm { rho: rho * (1.0 + perturb), s, sigma }).map_err(err)?;
            worst = worst.max(l.probabilities(nmax).sup_distance(&oracle(&rates, nmax, None)?));
        }
        let five = no_two_photon_absorption(No2aForm { rho: 1.0, s: 0.5, sigma: 0.0 }).map_err(err)?.mean();
        Ok(worst.max((five - 5.0).abs()))
    });

    let pass = sw.checks.iter().all(|c| c.pass);
    VerifyReport { command: "verify", quick, pass, checks: sw.checks }
}
