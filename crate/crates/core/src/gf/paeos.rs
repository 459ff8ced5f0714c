//! Phase-averaged even/odd states: the stationary states when one-photon processes are
//! absent (`ν = 0`) or negligible (`ν → 0`).

use serde::{Deserialize, Serialize};

use super::{ln_factorials, with_tail, GfError};
use crate::distribution::PhotonDistribution;
use crate::rates::DimensionlessParams;

/// Mixture `(1−β)·even + β·odd` of phase-averaged even/odd coherent states with `|α|² = r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaeosParams {
    pub beta: f64,
    pub r: f64,
    /// `S = (s+σ)/(s+1)` when β was derived from the weak-one-photon limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_eff: Option<f64>,
}

impl PaeosParams {
    pub fn new(beta: f64, r: f64) -> Result<Self, GfError> {
        let p = PaeosParams { beta, r, s_eff: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), GfError> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(GfError::Domain(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(GfError::Domain(format!("r must be finite and nonnegative, got {}", self.r)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PaeosLimit {
    Mixture(PaeosParams),
    /// `r = 0` and `S = 0`: nothing drives the field.
    Vacuum,
}

/// `ln cosh x` for `x ≥ 0` without overflow.
fn ln_cosh(x: f64) -> f64 {
    x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
}

/// `ln sinh x` for `x > 0` without overflow.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - std::f64::consts::LN_2
}

/// Odd weight in the limit `ν → 0` of the closed form:
/// `β = sinh r [sinh r + (S/r) cosh r] / [cosh 2r + (S/r) sinh 2r]`, i.e.
/// `1 − 2β = 1/[cosh 2r + (S/r) sinh 2r]`.
pub fn paeos_limit(params: DimensionlessParams) -> Result<PaeosLimit, GfError> {
    params.validate().map_err(|e| GfError::Domain(e.to_string()))?;
    let s_eff = params.s_eff();
    let r = params.r;
    if r == 0.0 {
        if s_eff == 0.0 {
            return Ok(PaeosLimit::Vacuum);
        }
        let beta = s_eff / (1.0 + 2.0 * s_eff);
        return Ok(PaeosLimit::Mixture(PaeosParams { beta, r, s_eff: Some(s_eff) }));
    }
    let u = s_eff / r;
    let beta = if r < 1.0 {
        let (sh, ch) = (r.sinh(), r.cosh());
        sh * (sh + u * ch) / ((2.0 * r).cosh() + u * (2.0 * r).sinh())
    } else {
        // e^{−2r}-scaled denominator, so large r stays finite
        let e = (-4.0 * r).exp();
        let d_scaled = 0.5 * (1.0 + e) + 0.5 * u * (1.0 - e);
        0.5 * (1.0 - (-2.0 * r).exp() / d_scaled)
    };
    Ok(PaeosLimit::Mixture(PaeosParams { beta, r, s_eff: Some(s_eff) }))
}

/// `p_{2k} = (1−β) r^{2k}/((2k)! cosh r)`, `p_{2k+1} = β r^{2k+1}/((2k+1)! sinh r)`.
///
/// At `r = 0` the odd column degenerates to `|1⟩`.
pub fn paeos_probabilities(p: &PaeosParams, nmax: usize) -> Result<PhotonDistribution, GfError> {
    p.validate()?;
    let PaeosParams { beta, r, .. } = *p;
    let mut probs = vec![0.0; nmax + 1];
    if r == 0.0 {
        probs[0] = 1.0 - beta;
        if nmax >= 1 {
            probs[1] = beta;
        }
        return Ok(with_tail(probs));
    }
    let lf = ln_factorials(nmax);
    let (lc, ls, lr) = (ln_cosh(r), ln_sinh(r), r.ln());
    for (n, slot) in probs.iter_mut().enumerate() {
        let (w, norm) = if n % 2 == 0 { (1.0 - beta, lc) } else { (beta, ls) };
        if w > 0.0 {
            *slot = (w.ln() + n as f64 * lr - lf[n] - norm).exp();
        }
    }
    Ok(with_tail(probs))
}

/// Odd weight `β* = ½(1 − e^{−2r})` at which the statistics turn sub-Poissonian.
pub fn paeos_threshold(r: f64) -> f64 {
    -0.5 * (-2.0 * r).exp_m1()
}

/// `Q = (r/B)(1 − B²)` with `B = (1−β) tanh r + β coth r`.
pub fn paeos_mandel_q(p: &PaeosParams) -> Result<f64, GfError> {
    p.validate()?;
    if p.r == 0.0 {
        return Err(GfError::Domain("Mandel's Q of the mixture needs r > 0".into()));
    }
    let t = p.r.tanh();
    let b = (1.0 - p.beta) * t + p.beta / t;
    Ok(p.r / b * (1.0 - b) * (1.0 + b))
}

/// Mandel's Q in the weak-one-photon limit:
/// `Q = r[1 − u²][1 − tanh² 2r] / {[1 + u tanh 2r][u + tanh 2r]}`, `u = S/r`.
pub fn paeos_mandel_q_weak(r: f64, s_eff: f64) -> Result<f64, GfError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(GfError::Domain(format!("r must be positive, got {r}")));
    }
    if !(s_eff >= 0.0 && s_eff.is_finite()) {
        return Err(GfError::Domain(format!("S must be finite and nonnegative, got {s_eff}")));
    }
    let u = s_eff / r;
    let t = (2.0 * r).tanh();
    let sech2 = {
        let c = (2.0 * r).cosh();
        1.0 / (c * c)
    };
    Ok(r * (1.0 - u) * (1.0 + u) * sech2 / ((1.0 + u * t) * (u + t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limit_beta(s_eff: f64, r: f64) -> f64 {
        // s = 0 makes S = σ
        match paeos_limit(DimensionlessParams { nu: 0.0, s: 0.0, sigma: s_eff, r }).unwrap() {
            PaeosLimit::Mixture(p) => p.beta,
            PaeosLimit::Vacuum => panic!("unexpected vacuum"),
        }
    }

    #[test]
    fn beta_reference_and_tanh_form() {
        let b = limit_beta(0.0, 1.0);
        assert!((b - 0.36709888558296015394).abs() < 1e-15);
        let t2 = 1f64.tanh().powi(2);
        assert!((b - t2 / (1.0 + t2)).abs() < 1e-15);
        // both branches of the evaluation agree around r = 1
        for &s in &[0.0, 0.3, 5.0] {
            let below = limit_beta(s, 1.0 - 1e-12);
            let above = limit_beta(s, 1.0);
            assert!((below - above).abs() < 1e-11);
        }
    }

    #[test]
    fn beta_limits() {
        assert!((limit_beta(1.0, 0.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((limit_beta(1.0, 1e-8) - 1.0 / 3.0).abs() < 1e-7);
        assert!((0.5 - limit_beta(0.0, 30.0)) < 1e-20);
        assert_eq!(limit_beta(0.0, 1000.0), 0.5);
        assert!(0.5 - limit_beta(1e9, 1.0) < 1e-8);
        for &(s, r) in &[(0.0, 0.1), (2.0, 3.0), (100.0, 0.01)] {
            assert!(limit_beta(s, r) < 0.5);
        }
        let vac = paeos_limit(DimensionlessParams { nu: 0.0, s: 0.0, sigma: 0.0, r: 0.0 }).unwrap();
        assert_eq!(vac, PaeosLimit::Vacuum);
    }

    #[test]
    fn series_reference_values() {
        let even = paeos_probabilities(&PaeosParams::new(0.0, 1.0).unwrap(), 40).unwrap();
        assert!((even.probs[0] - 0.64805427366388539957).abs() < 1e-16);
        assert_eq!(even.probs[1], 0.0);
        assert!((even.probs[2] - 0.32402713683194269979).abs() < 1e-16);
        assert!((even.probs[4] - 0.027002261402661891649).abs() < 1e-16);
        let odd = paeos_probabilities(&PaeosParams::new(1.0, 1.0).unwrap(), 40).unwrap();
        assert!((odd.probs[1] - 0.85091812823932154513).abs() < 1e-16);
        assert!((odd.probs[3] - 0.14181968803988692419).abs() < 1e-16);
        let half = paeos_probabilities(&PaeosParams::new(0.5, 7.0).unwrap(), 120).unwrap();
        assert!((half.even_mass() - 0.5).abs() < 1e-14);
        assert!((half.odd_mass() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn large_r_does_not_overflow() {
        let p = paeos_probabilities(&PaeosParams::new(0.3, 100.0).unwrap(), 400).unwrap();
        assert!((p.total() - 1.0).abs() < 1e-12);
        assert!((p.odd_mass() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn mandel_q_reference_and_threshold() {
        let q0 = paeos_mandel_q(&PaeosParams::new(0.0, 1.0).unwrap()).unwrap();
        assert!((q0 - 0.55144112954356641552).abs() < 1e-15);
        let q1 = paeos_mandel_q(&PaeosParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!((q1 + 0.55144112954356641552).abs() < 1e-15);
        for &r in &[0.1, 1.0, 2.0, 5.0, 10.0] {
            let q = paeos_mandel_q(&PaeosParams::new(paeos_threshold(r), r).unwrap()).unwrap();
            assert!(q.abs() < 1e-12, "r={r}: {q}");
        }
    }

    #[test]
    fn mandel_q_matches_moments() {
        let p = PaeosParams::new(0.37, 2.5).unwrap();
        let d = paeos_probabilities(&p, 100).unwrap();
        assert!((d.mandel_q().unwrap() - paeos_mandel_q(&p).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn weak_q_values() {
        assert!((paeos_mandel_q_weak(1.0, 0.0).unwrap() - 0.073287140651731211931).abs() < 1e-16);
        assert_eq!(paeos_mandel_q_weak(2.0, 2.0).unwrap(), 0.0);
        let r = 1.0f64;
        let inf = -r / (2.0 * r).tanh() * (1.0 - (2.0 * r).tanh().powi(2));
        assert!((paeos_mandel_q_weak(r, 1e12).unwrap() - inf).abs() < 1e-10);
        assert!(paeos_mandel_q_weak(0.0, 1.0).is_err());
    }

    #[test]
    fn weak_q_equals_mixture_q() {
        for &(s_eff, r) in &[(0.0, 1.0), (0.4, 2.0), (3.0, 0.7)] {
            let beta = limit_beta(s_eff, r);
            let q = paeos_mandel_q(&PaeosParams::new(beta, r).unwrap()).unwrap();
            assert!((q - paeos_mandel_q_weak(r, s_eff).unwrap()).abs() < 1e-13);
        }
    }
}
