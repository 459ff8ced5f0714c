//! Closed-form stationary generating function and its limits.
//!
//! For the dimensionless family `(ν, s, σ, r)` the stationary generating function is
//!
//! ```text
//! F(z) = e^{h(1−z)} Φ(a; c; R(1+z)) / Φ(a; c; 2R)
//! R = √((νs)² + 4r²),  h = (R − νs)/2,  g = [s + σ + h(1+s)]/R,  a = νg,  c = ν(1+s)
//! ```
//!
//! Probabilities come from the Cauchy product of the Taylor series of `e^{−hz}` and of
//! `Φ(a; c; R(1+z))` about `z = 0`. When `h` is large that product cancels badly, and the
//! affected coefficients are taken from a discrete Cauchy integral over the unit circle.

mod limits;
mod paeos;

pub use limits::{negbin_limit, no_two_photon_absorption, NegBinLimit, No2aForm, No2aLimit};
pub use paeos::{
    paeos_limit, paeos_mandel_q, paeos_mandel_q_weak, paeos_probabilities, paeos_threshold, PaeosLimit, PaeosParams,
};

pub use crate::distribution::beta_from_initial;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::PhotonDistribution;
use crate::rates::DimensionlessParams;
use crate::specfun::{kummer_phi_complex, kummer_phi_log, LogScaledReal, SpecFunError};
use crate::steady::choose_truncation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GfError {
    #[error("no closed form for these parameters: {reason}; use `{suggestion}`")]
    Degenerate { reason: String, suggestion: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("mean photon number is zero; Mandel's Q is undefined")]
    ZeroMean,
    #[error("factorial moments are available for orders 1..=4, got {0}")]
    MomentOrder(usize),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// `ln n!` for `n = 0..=nmax`.
pub(crate) fn ln_factorials(nmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for n in 1..=nmax {
        acc += (n as f64).ln();
        out.push(acc);
    }
    out
}

/// Wraps `probs` with the missing mass as tail bound.
pub(crate) fn with_tail(probs: Vec<f64>) -> PhotonDistribution {
    let total: f64 = probs.iter().sum();
    PhotonDistribution::new(probs, (1.0 - total).max(0.0))
}

/// Solved constants of the stationary generating function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct GfClosedForm {
    pub params: DimensionlessParams,
    pub R: f64,
    pub h: f64,
    pub g: f64,
    pub a: f64,
    pub c: f64,
    /// `Φ(a; c; 2R)`
    pub norm: LogScaledReal,
}

/// Builds the closed form; `ν = 0` and `R = 0` have none and are rejected with a pointer
/// to the right route.
#[allow(non_snake_case)]
pub fn closed_form(params: DimensionlessParams) -> Result<GfClosedForm, GfError> {
    params.validate().map_err(|e| GfError::Domain(e.to_string()))?;
    let DimensionlessParams { nu, s, sigma, r } = params;
    if nu == 0.0 {
        return Err(GfError::Degenerate {
            reason: "nu = 0 conserves photon-number parity".into(),
            suggestion: "paeos".into(),
        });
    }
    let R = (nu * s).hypot(2.0 * r);
    if R == 0.0 {
        let suggestion = if sigma == 0.0 { "oracle (the steady state is the vacuum)" } else { "oracle" };
        return Err(GfError::Degenerate { reason: "R = 0 (r = 0 and s = 0)".into(), suggestion: suggestion.into() });
    }
    // R − νs without cancellation
    let h = if nu * s > 0.0 { 2.0 * r * r / (R + nu * s) } else { 0.5 * R };
    let g = (s + sigma + h * (1.0 + s)) / R;
    let a = nu * g;
    let c = nu * (1.0 + s);
    let norm = kummer_phi_log(a, c, 2.0 * R)?;
    Ok(GfClosedForm { params, R, h, g, a, c, norm })
}

impl GfClosedForm {
    /// `ln Φ(a+m; c+m; x) − ln Φ(a; c; 2R)`
    fn ln_phi_ratio(&self, m: usize, x: f64) -> Result<f64, GfError> {
        let mf = m as f64;
        Ok(kummer_phi_log(self.a + mf, self.c + mf, x)?.ln() - self.norm.ln())
    }

    /// `ln((a)_m / (c)_m)` for `m = 0..=nmax`.
    fn ln_pochhammer_ratios(&self, nmax: usize) -> Vec<f64> {
        let mut out = vec![0.0; nmax + 1];
        for m in 1..=nmax {
            let j = (m - 1) as f64;
            out[m] = out[m - 1] + ((self.a + j) / (self.c + j)).ln();
        }
        out
    }

    /// `F(z)` at a complex point on or inside the unit circle.
    fn eval_complex(&self, z: Complex64) -> Result<Complex64, GfError> {
        let (m, ln_scale) = kummer_phi_complex(self.a, self.c, (1.0 + z) * self.R)?;
        let exponent = (1.0 - z) * self.h + (ln_scale - self.norm.ln());
        Ok(m * exponent.exp())
    }
}

/// `F(z)` for real `z ∈ [−1, 1]`.
pub fn gf_eval(cf: &GfClosedForm, z: f64) -> Result<f64, GfError> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(GfError::Domain(format!("z must lie in [-1, 1], got {z}")));
    }
    if z == 1.0 {
        return Ok(1.0);
    }
    let ln = cf.h * (1.0 - z) + cf.ln_phi_ratio(0, cf.R * (1.0 + z))?;
    Ok(ln.exp())
}

/// Largest admissible absolute error of a Cauchy-product coefficient.
const CAUCHY_ABS_TOL: f64 = 1e-14;

/// `p_0 ..= p_nmax` of the closed form.
pub fn photon_probabilities(cf: &GfClosedForm, nmax: usize) -> Result<PhotonDistribution, GfError> {
    if nmax < 1 {
        return Err(GfError::Domain("nmax must be at least 1".into()));
    }
    let lf = ln_factorials(nmax);
    let ln_poch = cf.ln_pochhammer_ratios(nmax);
    let ln_r = cf.R.ln();
    let ln_h = cf.h.ln();
    // m-th Taylor coefficient of Φ(a; c; R(1+z)) / Φ(a; c; 2R), in log form
    let mut ln_taylor = Vec::with_capacity(nmax + 1);
    for m in 0..=nmax {
        ln_taylor.push(m as f64 * ln_r - lf[m] + ln_poch[m] + cf.ln_phi_ratio(m, cf.R)?);
    }
    let mut probs = vec![0.0; nmax + 1];
    let mut unstable = Vec::new();
    for n in 0..=nmax {
        let mut sum = 0.0f64;
        let mut abs_sum = 0.0f64;
        for m in 0..=n {
            let k = n - m;
            let ln_exp = if k == 0 { 0.0 } else { k as f64 * ln_h - lf[k] };
            let t = (cf.h + ln_exp + ln_taylor[m]).exp();
            sum += if k % 2 == 0 { t } else { -t };
            abs_sum += t;
        }
        probs[n] = sum;
        if 8.0 * f64::EPSILON * abs_sum > CAUCHY_ABS_TOL {
            unstable.push(n);
        }
    }
    if !unstable.is_empty() {
        let contour = contour_coefficients(cf, nmax)?;
        for n in unstable {
            probs[n] = contour[n];
        }
    }
    for p in probs.iter_mut() {
        // round-off only; every coefficient of F is nonnegative
        *p = p.max(0.0);
    }
    Ok(with_tail(probs))
}

/// Coefficients from the discrete Cauchy integral `p_n = (1/N) Σ_k F(ω^k) ω^{−kn}`.
///
/// `|F| ≤ 1` on the unit circle, so the absolute error stays near machine precision;
/// aliasing is avoided by taking `N` well beyond the support of the distribution.
fn contour_coefficients(cf: &GfClosedForm, nmax: usize) -> Result<Vec<f64>, GfError> {
    let support = choose_truncation(&cf.params, 1e-13);
    let nodes = (2 * (nmax + 1)).max(2 * support).max(64).next_power_of_two();
    let step = std::f64::consts::TAU / nodes as f64;
    // F(conj z) = conj F(z): only the upper half circle is needed
    let half = nodes / 2;
    let mut values = Vec::with_capacity(half + 1);
    for k in 0..=half {
        values.push(cf.eval_complex(Complex64::from_polar(1.0, step * k as f64))?);
    }
    let mut out = vec![0.0; nmax + 1];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc = values[0].re + if n % 2 == 0 { values[half].re } else { -values[half].re };
        for (k, v) in values.iter().enumerate().take(half).skip(1) {
            let w = Complex64::from_polar(1.0, -step * ((k * n) % nodes) as f64);
            acc += 2.0 * (v * w).re;
        }
        *slot = acc / nodes as f64;
    }
    Ok(out)
}

/// `d^m F / dz^m` at `z = 1`, i.e. `E[n(n−1)…(n−m+1)]`, for `m ≤ 4`.
pub fn factorial_moment(cf: &GfClosedForm, m: usize) -> Result<f64, GfError> {
    if !(1..=4).contains(&m) {
        return Err(GfError::MomentOrder(m));
    }
    let ln_poch = cf.ln_pochhammer_ratios(m);
    let mut binom = 1.0f64;
    let mut total = 0.0f64;
    for j in 0..=m {
        let ratio = (j as f64 * cf.R.ln() + ln_poch[j] + cf.ln_phi_ratio(j, 2.0 * cf.R)?).exp();
        total += binom * (-cf.h).powi((m - j) as i32) * ratio;
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    Ok(total.max(0.0))
}

/// Mandel's `Q = N2/N1 − N1`.
pub fn mandel_q(cf: &GfClosedForm) -> Result<f64, GfError> {
    let n1 = factorial_moment(cf, 1)?;
    if n1 <= 0.0 {
        return Err(GfError::ZeroMean);
    }
    Ok(factorial_moment(cf, 2)? / n1 - n1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(nu: f64, s: f64, sigma: f64, r: f64) -> DimensionlessParams {
        DimensionlessParams { nu, s, sigma, r }
    }

    #[test]
    fn constants_for_s_zero() {
        let cf = closed_form(params(1.0, 0.0, 1.0, 1.0)).unwrap();
        assert_eq!((cf.R, cf.h, cf.g, cf.a, cf.c), (2.0, 1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn constants_without_two_photon_emission() {
        let cf = closed_form(params(2.0, 0.5, 0.0, 0.0)).unwrap();
        assert_eq!((cf.R, cf.h, cf.g, cf.a, cf.c), (1.0, 0.0, 0.5, 1.0, 3.0));
    }

    #[test]
    fn degenerate_families_are_routed() {
        let e = closed_form(params(0.0, 0.5, 0.0, 1.0)).unwrap_err();
        assert!(matches!(e, GfError::Degenerate { ref suggestion, .. } if suggestion == "paeos"));
        assert!(matches!(closed_form(params(1.0, 0.0, 0.0, 0.0)), Err(GfError::Degenerate { .. })));
        assert!(matches!(closed_form(params(1.0, -1.0, 0.0, 1.0)), Err(GfError::Domain(_))));
    }

    #[test]
    fn generating_function_endpoints() {
        let cf = closed_form(params(1.0, 0.5, 0.0, 1.0)).unwrap();
        assert_eq!(gf_eval(&cf, 1.0).unwrap(), 1.0);
        let p = photon_probabilities(&cf, 60).unwrap();
        assert!((gf_eval(&cf, 0.0).unwrap() - p.probs[0]).abs() < 1e-15);
        let parity: f64 = p.probs.iter().enumerate().map(|(n, x)| if n % 2 == 0 { *x } else { -x }).sum();
        assert!((gf_eval(&cf, -1.0).unwrap() - parity).abs() < 1e-14);
        assert!(gf_eval(&cf, 1.5).is_err());
    }

    #[test]
    fn probabilities_match_reference() {
        // 60-digit values from tests/fixtures/oracle_values.py
        let want = [
            0.43690057437987620457,
            0.30779071583190598861,
            0.17378007286895415912,
            0.059560285761311924216,
            0.01718319384604033904,
            0.0038764914308122253569,
            0.00075963928173824923107,
        ];
        let cf = closed_form(params(1.0, 0.5, 0.0, 1.0)).unwrap();
        let p = photon_probabilities(&cf, 60).unwrap();
        for (n, w) in want.iter().enumerate() {
            assert!((p.probs[n] - w).abs() < 1e-14, "p_{n} = {} vs {w}", p.probs[n]);
        }
        assert!((p.total() + p.tail_bound - 1.0).abs() < 1e-12);
        assert!((factorial_moment(&cf, 1).unwrap() - 0.92777305046033760889).abs() < 1e-13);
        assert!((p.mean() - 0.92777305046033760889).abs() < 1e-13);
    }

    #[test]
    fn contour_route_agrees_with_cauchy_product() {
        let cf = closed_form(params(1.0, 0.5, 0.0, 1.0)).unwrap();
        let direct = photon_probabilities(&cf, 40).unwrap();
        let contour = contour_coefficients(&cf, 40).unwrap();
        for n in 0..=40 {
            assert!((direct.probs[n] - contour[n]).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn large_h_uses_stable_route() {
        // h = 20: the raw Cauchy product loses everything to cancellation
        let cf = closed_form(params(0.1, 0.0, 1.0, 20.0)).unwrap();
        let p = photon_probabilities(&cf, 120).unwrap();
        assert!((p.total() - 1.0).abs() < 1e-10);
        let moments = (factorial_moment(&cf, 1).unwrap(), factorial_moment(&cf, 2).unwrap());
        assert!((p.mean() - moments.0).abs() < 1e-8 * moments.0);
        assert!((p.factorial_moment(2) - moments.1).abs() < 1e-8 * moments.1);
    }

    #[test]
    fn thermal_limit_mean_and_q() {
        let cf = closed_form(params(1e5, 0.5, 0.0, 1.0)).unwrap();
        assert!((factorial_moment(&cf, 1).unwrap() - 1.0).abs() < 1e-3);
        assert!((mandel_q(&cf).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn moment_orders_are_checked() {
        let cf = closed_form(params(1.0, 0.5, 0.0, 1.0)).unwrap();
        assert_eq!(factorial_moment(&cf, 0), Err(GfError::MomentOrder(0)));
        assert_eq!(factorial_moment(&cf, 5), Err(GfError::MomentOrder(5)));
        let p = photon_probabilities(&cf, 80).unwrap();
        for m in 1..=4 {
            let exact = factorial_moment(&cf, m).unwrap();
            assert!((p.factorial_moment(m) - exact).abs() < 1e-12 * exact.max(1.0), "m={m}");
        }
    }

    #[test]
    fn weak_one_photon_limit_matches_mixture() {
        let cf = closed_form(params(1e-6, 0.0, 0.0, 1.0)).unwrap();
        let p = photon_probabilities(&cf, 40).unwrap();
        let beta = 0.36709888558296015394;
        assert!((p.probs[0] - 0.64805427366388539957 * (1.0 - beta)).abs() < 1e-5);
        assert!((p.odd_mass() - beta).abs() < 1e-5);
        let q = mandel_q(&cf).unwrap();
        assert!((q - paeos_mandel_q_weak(1.0, 0.0).unwrap()).abs() < 1e-5);
    }
}
