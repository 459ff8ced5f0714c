//! Stationary distributions of the truncated master equation, used as the independent
//! reference for every closed form in the crate.
//!
//! Two routes are available: a direct nullspace solve of `G p = 0` and implicit time
//! stepping of `dp/dt = G p` until the residual is small. When two-photon processes act
//! alone the generator splits into even and odd sectors; the stationary state is then
//! fixed only once the odd-sector weight β is supplied.

mod truncation;

pub use truncation::{choose_truncation, tail_estimate, MAX_NMAX, MIN_NMAX};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::PhotonDistribution;
use crate::linalg;
use crate::rates::{GeneratorMatrix, Parity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteadyError {
    #[error("dimension mismatch: generator has {expected} states, vector has {got}")]
    Dimension { expected: usize, got: usize },
    #[error("steady state is not unique (nullspace dimension {0}); supply the initial odd-parity weight")]
    NoUniqueSteadyState(usize),
    #[error("unsupported generator structure: nullspace dimension {0}")]
    UnsupportedStructure(usize),
    #[error("parity weight must lie in [0, 1], got {0}")]
    InvalidParityWeight(f64),
    #[error("initial distribution is not normalized (sum = {0})")]
    NotNormalized(f64),
    #[error("no convergence by t = {time}: residual {residual:e} above {tol:e}")]
    NonConvergence { time: f64, residual: f64, tol: f64 },
    #[error("linear solve failed at step size {0}")]
    SingularStep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SteadyMethod {
    Nullspace,
    Evolve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyReport {
    pub distribution: PhotonDistribution,
    /// `‖G p‖₁`
    pub residual: f64,
    pub method: SteadyMethod,
    /// Odd-sector weight used for a parity-split generator.
    pub parity_weight: Option<f64>,
}

/// Normalized null vector of a generator, or the number of free columns found.
fn null_vector(g: &GeneratorMatrix) -> Result<Vec<f64>, usize> {
    let dim = g.dim();
    if dim == 1 {
        return Ok(vec![1.0]);
    }
    // columns sum to zero, so the last balance row is implied by the others
    let mut rows = g.band_rows();
    rows.pop();
    let e = linalg::echelon(rows, dim, vec![0.0; dim - 1]);
    if e.free.len() != 1 {
        return Err(e.free.len());
    }
    let v = e.back_substitute(&[1.0], true);
    let total: f64 = v.iter().sum();
    Ok(v.into_iter().map(|x| x / total).collect())
}

/// Mass beyond `nmax` extrapolated from the decay of the last two parity pairs.
fn extrapolated_tail(p: &[f64]) -> f64 {
    let n = p.len();
    if n < 4 {
        return 0.0;
    }
    let last = p[n - 1] + p[n - 2];
    let before = p[n - 3] + p[n - 4];
    if last == 0.0 {
        return 0.0;
    }
    let t = last / before;
    if t >= 1.0 || !t.is_finite() {
        return last.min(1.0);
    }
    last * t / (1.0 - t)
}

fn report(g: &GeneratorMatrix, p: Vec<f64>, method: SteadyMethod, parity_weight: Option<f64>) -> SteadyReport {
    let residual = g.residual_l1(&p);
    let tail = extrapolated_tail(&p);
    SteadyReport { distribution: PhotonDistribution::new(p, tail), residual, method, parity_weight }
}

fn check_weight(w: f64) -> Result<(), SteadyError> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(SteadyError::InvalidParityWeight(w))
    }
}

/// Stationary state of `g` by direct solution of `G p = 0`, `Σ p = 1`.
///
/// A parity-split generator has a two-dimensional nullspace; each sector is solved on its
/// own and the two normalized solutions are mixed with odd weight `parity_weight`.
/// For a connected generator the weight is ignored and reported as `None`.
pub fn steady_state(g: &GeneratorMatrix, parity_weight: Option<f64>) -> Result<SteadyReport, SteadyError> {
    if g.is_parity_split() && g.dim() > 1 {
        let beta = parity_weight.ok_or(SteadyError::NoUniqueSteadyState(2))?;
        check_weight(beta)?;
        let mut p = vec![0.0; g.dim()];
        for (parity, weight) in [(Parity::Even, 1.0 - beta), (Parity::Odd, beta)] {
            let (idx, sub) = g.sector(parity);
            let v = null_vector(&sub).map_err(|free| SteadyError::UnsupportedStructure(free + 1))?;
            for (&n, x) in idx.iter().zip(v) {
                p[n] = weight * x;
            }
        }
        return Ok(report(g, p, SteadyMethod::Nullspace, Some(beta)));
    }
    match null_vector(g) {
        Ok(p) => Ok(report(g, p, SteadyMethod::Nullspace, None)),
        Err(2) => Err(SteadyError::NoUniqueSteadyState(2)),
        Err(free) => Err(SteadyError::UnsupportedStructure(free)),
    }
}

/// Controls for [`evolve_to_steady`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Give up once the integrated time exceeds this.
    pub max_time: f64,
    /// Upper limit on `dt · max exit rate`; bounds round-off drift per step.
    pub max_stiffness: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { max_time: 1e9, max_stiffness: 1e4 }
    }
}

/// Integrates `dp/dt = G p` with backward Euler until `‖G p‖₁ <= tol`.
///
/// `I − dt·G` is a column-diagonally-dominant M-matrix, so each step maps probability
/// vectors to probability vectors and never couples sectors that `G` keeps apart. The step
/// doubles after every accepted step up to the stiffness limit.
pub fn evolve_to_steady(
    g: &GeneratorMatrix,
    p0: &PhotonDistribution,
    tol: f64,
    options: EvolveOptions,
) -> Result<SteadyReport, SteadyError> {
    if p0.probs.len() != g.dim() {
        return Err(SteadyError::Dimension { expected: g.dim(), got: p0.probs.len() });
    }
    let total = p0.total();
    if (total - 1.0).abs() > 1e-10 {
        return Err(SteadyError::NotNormalized(total));
    }
    let parity_weight = g.is_parity_split().then(|| p0.odd_mass());
    let mut p = p0.probs.clone();
    let mut residual = g.residual_l1(&p);
    let rate = g.max_exit_rate();
    if residual <= tol || rate == 0.0 {
        return Ok(report(g, p, SteadyMethod::Evolve, parity_weight));
    }
    let mut dt_max = options.max_stiffness / rate;
    let mut dt = 0.5 / rate;
    let mut t = 0.0;
    while residual > tol {
        if t > options.max_time {
            return Err(SteadyError::NonConvergence { time: t, residual, tol });
        }
        let next = linalg::solve(g.implicit_step_matrix(dt), p.clone()).ok_or(SteadyError::SingularStep(dt))?;
        if !step_acceptable(&next, total) {
            // round-off broke positivity or conservation: retry smaller
            dt_max = 0.5 * dt;
            dt = dt_max;
            if dt * rate < 1e-12 {
                return Err(SteadyError::SingularStep(dt));
            }
            continue;
        }
        p = next;
        t += dt;
        residual = g.residual_l1(&p);
        dt = (2.0 * dt).min(dt_max);
    }
    Ok(report(g, p, SteadyMethod::Evolve, parity_weight))
}

fn step_acceptable(p: &[f64], initial_total: f64) -> bool {
    let total: f64 = p.iter().sum();
    p.iter().all(|&x| x >= -1e-12) && (total - initial_total).abs() <= 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{DimensionlessParams, FamilyRates, RawRates};

    fn paeos_generator(r: f64, nmax: usize) -> GeneratorMatrix {
        GeneratorMatrix::from_rates(&DimensionlessParams { nu: 0.0, s: 0.0, sigma: 0.0, r }, nmax).unwrap()
    }

    #[test]
    fn vacuum_absorbs_pure_one_photon_decay() {
        let g = GeneratorMatrix::from_rates(&FamilyRates::from(RawRates { d1a: 1.0, ..RawRates::default() }), 10).unwrap();
        let rep = steady_state(&g, None).unwrap();
        assert_eq!(rep.distribution.probs[0], 1.0);
        assert!(rep.distribution.probs[1..].iter().all(|&p| p == 0.0));
        assert_eq!(rep.residual, 0.0);
    }

    #[test]
    fn even_sector_matches_series() {
        // p_2k = r^2k / ((2k)! cosh r), frozen from tests/fixtures/oracle_values.py
        let rep = steady_state(&paeos_generator(1.0, 60), Some(0.0)).unwrap();
        let p = &rep.distribution.probs;
        assert!((p[0] - 0.64805427366388539957).abs() < 1e-13);
        assert!((p[2] - 0.32402713683194269979).abs() < 1e-13);
        assert!((p[4] - 0.027002261402661891649).abs() < 1e-13);
        assert!(p.iter().skip(1).step_by(2).all(|&x| x == 0.0));
        assert!(rep.residual <= 1e-10);
    }

    #[test]
    fn parity_split_needs_weight() {
        let g = paeos_generator(1.0, 30);
        assert_eq!(steady_state(&g, None), Err(SteadyError::NoUniqueSteadyState(2)));
        assert_eq!(steady_state(&g, Some(1.5)), Err(SteadyError::InvalidParityWeight(1.5)));
    }

    #[test]
    fn mixture_of_sector_solutions() {
        let g = paeos_generator(2.0, 50);
        let even = steady_state(&g, Some(0.0)).unwrap().distribution;
        let odd = steady_state(&g, Some(1.0)).unwrap().distribution;
        for &beta in &[0.1, 0.37, 0.5, 0.9] {
            let mixed = steady_state(&g, Some(beta)).unwrap().distribution;
            assert!(mixed.sup_distance(&even.mix(&odd, beta)) <= 1e-12);
            assert!((mixed.odd_mass() - beta).abs() < 1e-14);
        }
    }

    #[test]
    fn evolution_returns_fixed_point_immediately() {
        let g = paeos_generator(1.0, 40);
        let rep = steady_state(&g, Some(0.25)).unwrap();
        let again = evolve_to_steady(&g, &rep.distribution, 1e-9, EvolveOptions::default()).unwrap();
        assert_eq!(again.distribution, rep.distribution);
    }

    #[test]
    fn evolution_from_one_photon_reaches_odd_column() {
        let g = paeos_generator(1.0, 40);
        let rep = evolve_to_steady(&g, &PhotonDistribution::fock(1, 40), 1e-12, EvolveOptions::default()).unwrap();
        let p = &rep.distribution.probs;
        assert!((p[1] - 0.85091812823932154513).abs() < 1e-9);
        assert!((p[3] - 0.14181968803988692419).abs() < 1e-9);
        assert!((rep.distribution.odd_mass() - 1.0).abs() < 1e-12);
        assert_eq!(rep.parity_weight, Some(1.0));
    }

    #[test]
    fn evolution_rejects_bad_inputs() {
        let g = paeos_generator(1.0, 10);
        let short = PhotonDistribution::vacuum(5);
        assert!(matches!(evolve_to_steady(&g, &short, 1e-9, EvolveOptions::default()), Err(SteadyError::Dimension { .. })));
        let mut p = PhotonDistribution::vacuum(10);
        p.probs[0] = 0.5;
        assert!(matches!(evolve_to_steady(&g, &p, 1e-9, EvolveOptions::default()), Err(SteadyError::NotNormalized(_))));
    }

    #[test]
    fn evolution_steps_stay_positive_and_conservative() {
        let p = DimensionlessParams { nu: 0.1, s: 2.0, sigma: 1.0, r: 5.0 };
        let g = GeneratorMatrix::from_rates(&p, 60).unwrap();
        let rep = evolve_to_steady(&g, &PhotonDistribution::vacuum(60), 1e-11, EvolveOptions::default()).unwrap();
        assert!(rep.distribution.probs.iter().all(|&x| x >= -1e-12));
        assert!((rep.distribution.total() - 1.0).abs() <= 1e-12);
        assert!(!step_acceptable(&[1.0, -1e-9], 1.0 - 1e-9));
        assert!(!step_acceptable(&[0.5, 0.5 + 1e-11], 1.0));
        assert!(step_acceptable(&[0.5, 0.5], 1.0));
    }

    #[test]
    fn evolution_gives_up_after_max_time() {
        let g = GeneratorMatrix::from_rates(&DimensionlessParams { nu: 1e-6, s: 0.3, sigma: 0.0, r: 1.0 }, 30).unwrap();
        let opts = EvolveOptions { max_time: 1.0, ..EvolveOptions::default() };
        let res = evolve_to_steady(&g, &PhotonDistribution::vacuum(30), 1e-14, opts);
        assert!(matches!(res, Err(SteadyError::NonConvergence { .. })));
    }
}
