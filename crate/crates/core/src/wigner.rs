//! Wigner functions in the convention `W(q, p)` with `∫∫ W dq dp = 2π`, so that the
//! vacuum is `2 e^{−q²−p²}`. Phase-symmetric states depend on `x = √(q² + p²)` only.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::PhotonDistribution;
use crate::gf::PaeosParams;
use crate::rates::Parity;
use crate::specfun::{bessel_i0_scaled, bessel_j0, laguerre};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WignerError {
    #[error("the odd coherent state is undefined at α = 0")]
    OddAtOrigin,
    #[error("phase averaging needs at least 64 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("phase average did not settle below {tol:e} by {nodes} nodes")]
    NoConvergence { nodes: usize, tol: f64 },
}

/// `W_n(x) = 2(−1)^n e^{−x²} L_n(2x²)`
pub fn wigner_fock_radial(n: usize, x: f64) -> f64 {
    let sign = if n % 2 == 0 { 2.0 } else { -2.0 };
    sign * (-x * x).exp() * laguerre(n, 2.0 * x * x)
}

/// Contributions below this are skipped; `|W_n| ≤ 2`.
const MIXTURE_CUTOFF: f64 = 1e-12;

/// `Σ p_n W_n(x)` for a diagonal state.
///
/// The Laguerre recurrence runs on `e^{−x²} L_n(2x²)`, which stays within `[−1, 1]`,
/// so large `n` and `x` cannot overflow.
pub fn wigner_mixture_radial(probs: &PhotonDistribution, x: f64) -> f64 {
    let y = 2.0 * x * x;
    let last = probs.probs.iter().rposition(|&p| 2.0 * p >= MIXTURE_CUTOFF).unwrap_or(0);
    let mut prev = 0.0f64;
    let mut cur = (-x * x).exp();
    let mut sum = 0.0f64;
    for n in 0..=last {
        let p = probs.probs[n];
        if 2.0 * p >= MIXTURE_CUTOFF {
            sum += if n % 2 == 0 { p * cur } else { -p * cur };
        }
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - y) * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    2.0 * sum
}

/// Closed-form Wigner function of the phase-averaged even/odd mixture.
///
/// Written as `e^{−(x−√(2r))²}·I0s(√(8r)x)` plus a bounded `J0` term, with
/// `I0s(t) = e^{−t} I0(t)`, so nothing overflows for large `r`.
pub fn wigner_paeos_radial(p: &PaeosParams, x: f64) -> f64 {
    let PaeosParams { beta, r, .. } = *p;
    if r == 0.0 {
        return (1.0 - beta) * wigner_fock_radial(0, x) + beta * wigner_fock_radial(1, x);
    }
    let k = (8.0 * r).sqrt();
    let e2 = (-2.0 * r).exp();
    let one_minus_e4 = -(-4.0 * r).exp_m1();
    // [1 − (1−2β)e^{−2r}] and e^{−2r}[(1−2β)e^{2r} − 1], both free of cancellation in r
    let a = -(-2.0 * r).exp_m1() + 2.0 * beta * e2;
    let b = -(-2.0 * r).exp_m1() - 2.0 * beta;
    let d = x - (2.0 * r).sqrt();
    let i_term = a * (-d * d).exp() * bessel_i0_scaled(k * x);
    let j_term = b * (-x * x).exp() * bessel_j0(k * x);
    2.0 * (i_term + j_term) / one_minus_e4
}

/// An even or odd coherent state `N±(|α⟩ ± |−α⟩)` with `α = (q̄ + i p̄)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureEocsParams {
    pub qbar: f64,
    pub pbar: f64,
    pub sign: Parity,
    /// `N±²`
    pub norm_sq: f64,
}

impl PureEocsParams {
    pub fn new(qbar: f64, pbar: f64, sign: Parity) -> Result<Self, WignerError> {
        if !(qbar.is_finite() && pbar.is_finite()) {
            return Err(WignerError::Invalid(format!("non-finite quadrature mean ({qbar}, {pbar})")));
        }
        let alpha_sq = 0.5 * (qbar * qbar + pbar * pbar);
        let e = (-2.0 * alpha_sq).exp();
        let norm_sq = match sign {
            Parity::Even => 0.5 / (1.0 + e),
            Parity::Odd => {
                if alpha_sq == 0.0 {
                    return Err(WignerError::OddAtOrigin);
                }
                -0.5 / (-2.0 * alpha_sq).exp_m1()
            }
        };
        Ok(PureEocsParams { qbar, pbar, sign, norm_sq })
    }
}

/// Wigner function of a pure even/odd coherent state at `(q, p)`.
pub fn wigner_pure_eocs(s: &PureEocsParams, q: f64, p: f64) -> f64 {
    let (qb, pb) = (s.qbar, s.pbar);
    let plus = (-(q - qb).powi(2) - (p - pb).powi(2)).exp();
    let minus = (-(q + qb).powi(2) - (p + pb).powi(2)).exp();
    let fringe = 2.0 * (-q * q - p * p).exp() * (2.0 * (q * pb - p * qb)).cos();
    let fringe = match s.sign {
        Parity::Even => fringe,
        Parity::Odd => -fringe,
    };
    2.0 * s.norm_sq * (plus + minus + fringe)
}

/// Default starting node count of [`phase_average`].
pub const PHASE_NODES: usize = 256;
const PHASE_TOL: f64 = 1e-8;
const PHASE_MAX_NODES: usize = 1 << 16;

/// `∫ dφ/2π W±(q, p; √(2r) cos φ, √(2r) sin φ)` by the trapezoid rule, starting from
/// `nodes` points and doubling until successive values differ by less than `1e-8`.
pub fn phase_average(r: f64, sign: Parity, q: f64, p: f64, nodes: usize) -> Result<f64, WignerError> {
    if nodes < 64 {
        return Err(WignerError::TooFewNodes(nodes));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(WignerError::Invalid(format!("r must be positive, got {r}")));
    }
    let amp = (2.0 * r).sqrt();
    // N± depends on |α|² = r only
    let state = PureEocsParams::new(amp, 0.0, sign)?;
    let at = |phi: f64| {
        let s = PureEocsParams { qbar: amp * phi.cos(), pbar: amp * phi.sin(), ..state };
        wigner_pure_eocs(&s, q, p)
    };
    let mut n = nodes;
    let mut sum: f64 = (0..n).map(|k| at(std::f64::consts::TAU * k as f64 / n as f64)).sum();
    let mut value = sum / n as f64;
    while n < PHASE_MAX_NODES {
        // reuse the old nodes; only the midpoints are new
        let mid: f64 = (0..n).map(|k| at(std::f64::consts::TAU * (k as f64 + 0.5) / n as f64)).sum();
        sum += mid;
        n *= 2;
        let next = sum / n as f64;
        let change = (next - value).abs();
        value = next;
        if change < PHASE_TOL {
            return Ok(value);
        }
    }
    Err(WignerError::NoConvergence { nodes: n, tol: PHASE_TOL })
}

/// `Σ_{k even} r^{2k}/(k!)²` and `Σ_{k odd} r^{2k}/(k!)²`, i.e. `(I0(2r) ± J0(2r))/2`.
fn bessel_sum_split(r: f64) -> (f64, f64) {
    let y = r * r;
    let (mut even, mut odd) = (1.0f64, 0.0f64);
    let mut term = 1.0f64;
    for k in 1..1000 {
        let kf = k as f64;
        term *= y / (kf * kf);
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
        if term < 1e-17 * even && kf > r {
            break;
        }
    }
    (even, odd)
}

/// Purity `Tr ρ²` of the phase-averaged mixture:
/// `μ = ½{((1−β)/cosh r)²[I0(2r)+J0(2r)] + (β/sinh r)²[I0(2r)−J0(2r)]}`.
pub fn purity_paeos(p: &PaeosParams) -> f64 {
    let PaeosParams { beta, r, .. } = *p;
    if r == 0.0 {
        return (1.0 - beta).powi(2) + beta * beta;
    }
    if r <= 8.0 {
        // direct series: no cancellation in I0 − J0 at small r
        let (even, odd) = bessel_sum_split(r);
        let (c, s) = (r.cosh(), r.sinh());
        return ((1.0 - beta) / c).powi(2) * even + (beta / s).powi(2) * odd;
    }
    let e2 = (-2.0 * r).exp();
    let i0s = bessel_i0_scaled(2.0 * r);
    let j0s = bessel_j0(2.0 * r) * e2;
    let even_w = 4.0 / (1.0 + e2).powi(2);
    let odd_w = 4.0 / (-(-2.0 * r).exp_m1()).powi(2);
    0.5 * ((1.0 - beta).powi(2) * even_w * (i0s + j0s) + beta * beta * odd_w * (i0s - j0s))
}

/// `Tr ρ² = Σ p_n²` for a diagonal state.
pub fn purity_from_probs(probs: &PhotonDistribution) -> f64 {
    probs.purity()
}

/// Composite Simpson estimate of `∫₀^xmax W(x)·x dx`; equals 1 for a normalized state once
/// `xmax` covers the support.
pub fn radial_normalization(w: impl Fn(f64) -> f64, xmax: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = xmax / n as f64;
    let f = |i: usize| {
        let x = h * i as f64;
        w(x) * x
    };
    let mut s = f(0) + f(n);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 * f(i) } else { 2.0 * f(i) };
    }
    s * h / 3.0
}

/// A sampled radial Wigner function on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialWignerCurve {
    pub xs: Vec<f64>,
    pub ws: Vec<f64>,
}

impl RadialWignerCurve {
    /// Samples `w` at `points` equally spaced `x ∈ [0, xmax]`.
    pub fn sample(w: impl Fn(f64) -> f64, xmax: f64, points: usize) -> Result<Self, WignerError> {
        if points < 2 {
            return Err(WignerError::Invalid(format!("need at least 2 points, got {points}")));
        }
        if !(xmax > 0.0 && xmax.is_finite()) {
            return Err(WignerError::Invalid(format!("xmax must be positive, got {xmax}")));
        }
        let step = xmax / (points - 1) as f64;
        let xs: Vec<f64> = (0..points).map(|i| step * i as f64).collect();
        let ws = xs.iter().map(|&x| w(x)).collect();
        Ok(RadialWignerCurve { xs, ws })
    }

    pub fn paeos(p: &PaeosParams, xmax: f64, points: usize) -> Result<Self, WignerError> {
        Self::sample(|x| wigner_paeos_radial(p, x), xmax, points)
    }

    pub fn min(&self) -> (f64, f64) {
        self.extreme(|a, b| a < b)
    }

    pub fn max(&self) -> (f64, f64) {
        self.extreme(|a, b| a > b)
    }

    /// `(x, W)` at the extreme value picked by `better`.
    fn extreme(&self, better: impl Fn(f64, f64) -> bool) -> (f64, f64) {
        let mut best = 0;
        for i in 1..self.ws.len() {
            if better(self.ws[i], self.ws[best]) {
                best = i;
            }
        }
        (self.xs[best], self.ws[best])
    }
}
