use serde::{Deserialize, Serialize};

use super::{with_tail, GfError};
use crate::distribution::PhotonDistribution;

fn check_s(s: f64) -> Result<(), GfError> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(GfError::Domain(format!("the limit is valid only for 0 < s < 1, got s = {s}")))
    }
}

fn check_nonnegative(name: &str, v: f64) -> Result<(), GfError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(GfError::Domain(format!("{name} must be finite and nonnegative, got {v}")))
    }
}

/// `ln` of the negative-binomial weights `((1−s)/(1−sz))^α` up to `nmax`.
fn ln_negbin(s: f64, alpha: f64, nmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    let mut ln_p = alpha * (-s).ln_1p();
    out.push(ln_p);
    for n in 0..nmax {
        let nf = n as f64;
        ln_p += (s * (nf + alpha) / (nf + 1.0)).ln();
        out.push(ln_p);
    }
    out
}

/// Large-ν limit: `F(z) = ((1−s)/(1−sz))^{1+σ/s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegBinLimit {
    pub s: f64,
    pub sigma: f64,
}

impl NegBinLimit {
    /// Exponent `1 + σ/s`.
    pub fn alpha(&self) -> f64 {
        1.0 + self.sigma / self.s
    }

    pub fn gf(&self, z: f64) -> f64 {
        ((1.0 - self.s) / (1.0 - self.s * z)).powf(self.alpha())
    }

    pub fn mean(&self) -> f64 {
        self.alpha() * self.s / (1.0 - self.s)
    }

    /// `Q = s/(1−s)` independent of σ.
    pub fn mandel_q(&self) -> f64 {
        self.s / (1.0 - self.s)
    }

    pub fn probabilities(&self, nmax: usize) -> PhotonDistribution {
        with_tail(ln_negbin(self.s, self.alpha(), nmax).into_iter().map(f64::exp).collect())
    }
}

pub fn negbin_limit(s: f64, sigma: f64) -> Result<NegBinLimit, GfError> {
    check_s(s)?;
    check_nonnegative("sigma", sigma)?;
    Ok(NegBinLimit { s, sigma })
}

/// Parameters of the first-order family without two-photon absorption.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct No2aForm {
    /// two-photon emission over one-photon absorption
    pub rho: f64,
    pub s: f64,
    pub sigma: f64,
}

impl No2aForm {
    /// `γ = (σ + ρ + ρ/s)/s`
    pub fn gamma(&self) -> f64 {
        (self.sigma + self.rho + self.rho / self.s) / self.s
    }
}

/// Solved no-two-photon-absorption limit:
/// `F(z) = ((1−s)/(1−sz))^{1+γ} e^{(ρ/s)(1−z)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct No2aLimit {
    pub form: No2aForm,
    pub gamma: f64,
}

impl No2aLimit {
    pub fn gf(&self, z: f64) -> f64 {
        let f = self.form;
        ((1.0 - f.s) / (1.0 - f.s * z)).powf(1.0 + self.gamma) * (f.rho / f.s * (1.0 - z)).exp()
    }

    pub fn mean(&self) -> f64 {
        let f = self.form;
        (1.0 + self.gamma) * f.s / (1.0 - f.s) - f.rho / f.s
    }

    /// Coefficients from the recurrence implied by
    /// `(1 − sz) F'(z) = [sα − λ(1 − sz)] F(z)`, `α = 1 + γ`, `λ = ρ/s`:
    /// `(n+1) p_{n+1} = [s(n+α) − λ] p_n + λ s p_{n−1}`.
    /// Since `sα − λ = s + σ + ρ ≥ 0` every term is nonnegative.
    pub fn probabilities(&self, nmax: usize) -> PhotonDistribution {
        let f = self.form;
        let alpha = 1.0 + self.gamma;
        let lambda = f.rho / f.s;
        let mut probs = vec![0.0; nmax + 1];
        // running log scale keeps an underflowing p_0 from zeroing the vector
        let mut scale = alpha * (-f.s).ln_1p() + lambda;
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        probs[0] = scale.exp();
        for n in 0..nmax {
            let nf = n as f64;
            let next = ((f.s * (nf + alpha) - lambda) * cur + lambda * f.s * prev) / (nf + 1.0);
            prev = cur;
            cur = next;
            if cur > 1e100 || (cur > 0.0 && cur < 1e-100) {
                scale += cur.ln();
                prev /= cur;
                cur = 1.0;
            }
            probs[n + 1] = (scale + cur.ln()).exp();
        }
        with_tail(probs)
    }
}

pub fn no_two_photon_absorption(form: No2aForm) -> Result<No2aLimit, GfError> {
    check_s(form.s)?;
    check_nonnegative("rho", form.rho)?;
    check_nonnegative("sigma", form.sigma)?;
    Ok(No2aLimit { form, gamma: form.gamma() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ln_factorials;

    fn poisson(mean: f64, nmax: usize) -> Vec<f64> {
        let lf = ln_factorials(nmax);
        (0..=nmax).map(|n| (n as f64 * mean.ln() - mean - lf[n]).exp()).collect()
    }

    #[test]
    fn thermal_case() {
        let nb = negbin_limit(0.5, 0.0).unwrap();
        let p = nb.probabilities(60);
        for n in 0..20 {
            assert!((p.probs[n] - 0.5f64.powi(n as i32 + 1)).abs() < 1e-16);
        }
        assert_eq!(nb.mean(), 1.0);
        assert!((p.mean() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exponent_two() {
        let nb = negbin_limit(0.5, 0.5).unwrap();
        assert_eq!(nb.alpha(), 2.0);
        assert_eq!(nb.mean(), 2.0);
        assert_eq!(nb.probabilities(10).probs[0], 0.25);
        assert!((nb.gf(0.3) - (0.5 / 0.85f64).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn small_s_goes_to_poisson() {
        let nb = negbin_limit(1e-7, 2.0).unwrap();
        assert!((nb.mean() - 2.0).abs() < 1e-6);
        assert!(nb.mandel_q().abs() < 1e-6);
        let p = nb.probabilities(40);
        let want = poisson(2.0, 40);
        for n in 0..=40 {
            assert!((p.probs[n] - want[n]).abs() < 1e-6);
        }
    }

    #[test]
    fn domain_of_validity() {
        assert!(negbin_limit(1.0, 0.0).is_err());
        assert!(negbin_limit(0.0, 0.0).is_err());
        assert!(negbin_limit(0.5, -1.0).is_err());
        let bad = No2aForm { rho: 1.0, s: 1.2, sigma: 0.0 };
        assert!(no_two_photon_absorption(bad).is_err());
    }

    #[test]
    fn no2a_without_rho_is_thermal() {
        let l = no_two_photon_absorption(No2aForm { rho: 0.0, s: 0.5, sigma: 0.0 }).unwrap();
        assert_eq!(l.mean(), 1.0);
        let p = l.probabilities(40);
        for n in 0..20 {
            assert!((p.probs[n] - 0.5f64.powi(n as i32 + 1)).abs() < 1e-16);
        }
    }

    #[test]
    fn no2a_mean_five() {
        let l = no_two_photon_absorption(No2aForm { rho: 1.0, s: 0.5, sigma: 0.0 }).unwrap();
        assert_eq!(l.gamma, 6.0);
        assert!((l.mean() - 5.0).abs() < 1e-15);
        let p = l.probabilities(200);
        assert!((p.total() - 1.0).abs() < 1e-13);
        assert!((p.mean() - 5.0).abs() < 1e-12);
        assert!(p.probs.iter().all(|&x| x >= 0.0));
        // p_0 = F(0)
        assert!((p.probs[0] - l.gf(0.0)).abs() < 1e-16);
    }

    #[test]
    fn no2a_matches_explicit_convolution() {
        let l = no_two_photon_absorption(No2aForm { rho: 0.3, s: 0.4, sigma: 0.2 }).unwrap();
        let nmax = 80;
        let nb: Vec<f64> = ln_negbin(0.4, 1.0 + l.gamma, nmax).into_iter().map(f64::exp).collect();
        // coefficients of e^{λ(1−z)}: e^λ (−λ)^k / k!
        let lambda: f64 = 0.3 / 0.4;
        let lf = ln_factorials(nmax);
        let ex: Vec<f64> = (0..=nmax)
            .map(|k| {
                let v = (lambda + k as f64 * lambda.ln() - lf[k]).exp();
                if k % 2 == 0 { v } else { -v }
            })
            .collect();
        let p = l.probabilities(nmax);
        for n in 0..=30 {
            let conv: f64 = (0..=n).map(|k| ex[k] * nb[n - k]).sum();
            assert!((p.probs[n] - conv).abs() < 1e-13, "n={n}");
        }
    }
}
