//! Rate coefficients of the population master equation.
//!
//! The master equation couples `p_n` to `p_{n±k}` through `k`-photon absorption and
//! emission channels. A channel of order `k` with rate function `f(n)` moves population
//! `n + k → n` (absorption) or `n → n + k` (emission) at rate `(n+k)!/n! · f(n)`.

mod generator;

pub use generator::{assemble_generator, GeneratorMatrix, Parity};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("coefficient {name} must be finite and nonnegative, got {value}")]
    InvalidCoefficient { name: String, value: f64 },
    #[error("emission index j = {0} is not allowed (need j >= 0 and j != 1)")]
    InvalidIndex(i64),
    #[error("emission index j = {0} appears more than once")]
    DuplicateIndex(i64),
    #[error("all rate coefficients are zero")]
    AllZero,
    #[error("saturated emission order must be >= 1, got {0}")]
    InvalidOrder(usize),
    #[error("not in the closed-form subfamily: {0}")]
    NotDimensionless(String),
    #[error("negative rate {value} for {kind:?} channel of order {order} at n = {n}")]
    NegativeRate { kind: ChannelKind, order: usize, n: usize, value: f64 },
    #[error("truncation nmax = {0} is too small (need at least 4)")]
    TruncationTooSmall(usize),
    #[error("rate table for {kind:?} order {order} has {len} entries, expected {expected}")]
    TableLength { kind: ChannelKind, order: usize, len: usize, expected: usize },
}

fn check_coefficient(name: &str, value: f64) -> Result<(), RateError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(RateError::InvalidCoefficient { name: name.to_string(), value })
    }
}

/// One term `W_{1j} (n + j) / (n + 1)` of the generalized one-photon emission rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionWeight {
    pub j: i64,
    pub w: f64,
}

/// Raw (dimensional) coefficients of the exactly solvable one/two-photon family.
///
/// Field names follow the JSON config keys; absent keys default to zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RawRates {
    pub d1a: f64,
    pub d2a: f64,
    pub d1e: f64,
    pub d2e: f64,
    pub d11e: f64,
    pub d10a: f64,
    pub d12a: f64,
    pub w1e: Vec<EmissionWeight>,
}

impl RawRates {
    pub fn validate(&self) -> Result<(), RateError> {
        for (name, v) in self.named_coefficients() {
            check_coefficient(name, v)?;
        }
        let mut seen = Vec::new();
        for wt in &self.w1e {
            // negative j makes f1_emission negative at small n
            if wt.j < 0 || wt.j == 1 {
                return Err(RateError::InvalidIndex(wt.j));
            }
            if seen.contains(&wt.j) {
                return Err(RateError::DuplicateIndex(wt.j));
            }
            seen.push(wt.j);
            check_coefficient(&format!("w1e[j={}]", wt.j), wt.w)?;
        }
        Ok(())
    }

    fn named_coefficients(&self) -> [(&'static str, f64); 7] {
        [
            ("d1a", self.d1a),
            ("d2a", self.d2a),
            ("d1e", self.d1e),
            ("d2e", self.d2e),
            ("d11e", self.d11e),
            ("d10a", self.d10a),
            ("d12a", self.d12a),
        ]
    }

    pub fn is_all_zero(&self) -> bool {
        self.named_coefficients().iter().all(|&(_, v)| v == 0.0) && self.w1e.iter().all(|w| w.w == 0.0)
    }

    /// True when only the five coefficients of the closed-form subfamily are in use.
    pub fn in_closed_form_subfamily(&self) -> bool {
        self.d10a == 0.0 && self.d12a == 0.0 && self.w1e.iter().all(|w| w.w == 0.0)
    }
}

/// Generalized Scully-Lamb emission channel `f_k(n) = d / (1 + γ (n+k)!/n!)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturatedEmission {
    pub k: usize,
    pub d: f64,
    pub gamma: f64,
}

impl SaturatedEmission {
    pub fn validate(&self) -> Result<(), RateError> {
        if self.k < 1 {
            return Err(RateError::InvalidOrder(self.k));
        }
        check_coefficient("d", self.d)?;
        check_coefficient("gamma", self.gamma)
    }
}

/// Dimensionless parameters `(ν, s, σ, r)` of the closed-form subfamily, all rates in
/// units of the two-photon absorption coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub nu: f64,
    pub s: f64,
    pub sigma: f64,
    pub r: f64,
}

impl DimensionlessParams {
    pub fn new(nu: f64, s: f64, sigma: f64, r: f64) -> Result<Self, RateError> {
        let p = DimensionlessParams { nu, s, sigma, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), RateError> {
        check_coefficient("nu", self.nu)?;
        check_coefficient("s", self.s)?;
        check_coefficient("sigma", self.sigma)?;
        check_coefficient("r", self.r)
    }

    /// Effective one-photon emission strength `S = (s + σ)/(s + 1)` of the weak-coupling limit.
    pub fn s_eff(&self) -> f64 {
        (self.s + self.sigma) / (self.s + 1.0)
    }
}

/// `(n+k)!/n!`
pub fn rising_factorial_count(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| (n + i) as f64).product()
}

/// `f1^(a)(n) = D1a + D10a·n + D12a·(n+2)`
pub fn f1_absorption(n: usize, raw: &RawRates) -> f64 {
    let n = n as f64;
    raw.d1a + raw.d10a * n + raw.d12a * (n + 2.0)
}

/// `f1^(e)(n) = D1e + [D11e + Σ_j W_1j (n+j)] / (n+1)`
pub fn f1_emission(n: usize, raw: &RawRates) -> f64 {
    let nf = n as f64;
    let weighted: f64 = raw.w1e.iter().map(|w| w.w * (nf + w.j as f64)).sum();
    raw.d1e + (raw.d11e + weighted) / (nf + 1.0)
}

/// Completely saturated two-photon emission `f2^(e)(n) = D2e / ((n+1)(n+2))`.
pub fn f2_emission(n: usize, raw: &RawRates) -> f64 {
    raw.d2e / rising_factorial_count(n, 2)
}

pub fn f2_absorption(_n: usize, raw: &RawRates) -> f64 {
    raw.d2a
}

pub fn saturated_emission_rate(n: usize, channel: &SaturatedEmission) -> f64 {
    channel.d / (1.0 + channel.gamma * rising_factorial_count(n, channel.k))
}

/// Reduces the five-coefficient subfamily to `(ν, s, σ, r)`.
pub fn to_dimensionless(raw: &RawRates) -> Result<DimensionlessParams, RateError> {
    raw.validate()?;
    if raw.d2a == 0.0 {
        return Err(RateError::NotDimensionless(
            "d2a = 0: use the no-two-photon-absorption limit".to_string(),
        ));
    }
    if !raw.in_closed_form_subfamily() {
        return Err(RateError::NotDimensionless(
            "d10a, d12a and w1e must vanish for the closed form; use the oracle".to_string(),
        ));
    }
    if raw.d1a == 0.0 && (raw.d1e != 0.0 || raw.d11e != 0.0) {
        return Err(RateError::NotDimensionless(
            "s and σ are undefined when d1a = 0 but one-photon emission is present".to_string(),
        ));
    }
    let (s, sigma) = if raw.d1a == 0.0 { (0.0, 0.0) } else { (raw.d1e / raw.d1a, raw.d11e / raw.d1a) };
    Ok(DimensionlessParams { nu: raw.d1a / raw.d2a, s, sigma, r: (raw.d2e / raw.d2a).sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Absorption,
    Emission,
}

/// A source of per-channel rate functions `f_k(n)`.
pub trait RateFunctions {
    /// `(kind, order)` of every channel; orders may repeat.
    fn channels(&self) -> Vec<(ChannelKind, usize)>;
    /// `f_k(n)` for the `index`-th entry of [`RateFunctions::channels`].
    fn rate(&self, index: usize, n: usize) -> f64;
}

/// The general family plus optional Scully-Lamb saturated emission channels.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyRates {
    #[serde(flatten)]
    pub raw: RawRates,
    #[serde(default)]
    pub saturated: Vec<SaturatedEmission>,
}

impl FamilyRates {
    pub fn new(raw: RawRates, saturated: Vec<SaturatedEmission>) -> Result<Self, RateError> {
        let f = FamilyRates { raw, saturated };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), RateError> {
        self.raw.validate()?;
        for s in &self.saturated {
            s.validate()?;
        }
        if self.raw.is_all_zero() && self.saturated.iter().all(|s| s.d == 0.0) {
            return Err(RateError::AllZero);
        }
        Ok(())
    }
}

impl From<RawRates> for FamilyRates {
    fn from(raw: RawRates) -> Self {
        FamilyRates { raw, saturated: Vec::new() }
    }
}

impl RateFunctions for FamilyRates {
    fn channels(&self) -> Vec<(ChannelKind, usize)> {
        let mut out = vec![
            (ChannelKind::Absorption, 1),
            (ChannelKind::Absorption, 2),
            (ChannelKind::Emission, 1),
            (ChannelKind::Emission, 2),
        ];
        out.extend(self.saturated.iter().map(|s| (ChannelKind::Emission, s.k)));
        out
    }

    fn rate(&self, index: usize, n: usize) -> f64 {
        match index {
            0 => f1_absorption(n, &self.raw),
            1 => f2_absorption(n, &self.raw),
            2 => f1_emission(n, &self.raw),
            3 => f2_emission(n, &self.raw),
            i => saturated_emission_rate(n, &self.saturated[i - 4]),
        }
    }
}

impl RateFunctions for DimensionlessParams {
    fn channels(&self) -> Vec<(ChannelKind, usize)> {
        vec![
            (ChannelKind::Absorption, 1),
            (ChannelKind::Absorption, 2),
            (ChannelKind::Emission, 1),
            (ChannelKind::Emission, 2),
        ]
    }

    fn rate(&self, index: usize, n: usize) -> f64 {
        let nf = n as f64;
        match index {
            0 => self.nu,
            1 => 1.0,
            2 => self.nu * (self.s + self.sigma / (nf + 1.0)),
            _ => self.r * self.r / rising_factorial_count(n, 2),
        }
    }
}

/// One channel evaluated on `n = 0..=nmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub kind: ChannelKind,
    pub order: usize,
    pub values: Vec<f64>,
}

/// Rate functions tabulated on `[0, nmax]`; the generator is assembled from these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTables {
    pub nmax: usize,
    pub channels: Vec<RateTable>,
}

impl RateTables {
    pub fn tabulate(rates: &impl RateFunctions, nmax: usize) -> Self {
        let channels = rates
            .channels()
            .into_iter()
            .enumerate()
            .map(|(i, (kind, order))| RateTable { kind, order, values: (0..=nmax).map(|n| rates.rate(i, n)).collect() })
            .collect();
        RateTables { nmax, channels }
    }

    pub fn validate(&self) -> Result<(), RateError> {
        for ch in &self.channels {
            if ch.order < 1 {
                return Err(RateError::InvalidOrder(ch.order));
            }
            if ch.values.len() != self.nmax + 1 {
                return Err(RateError::TableLength {
                    kind: ch.kind,
                    order: ch.order,
                    len: ch.values.len(),
                    expected: self.nmax + 1,
                });
            }
            if let Some((n, &value)) = ch.values.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
                return Err(RateError::NegativeRate { kind: ch.kind, order: ch.order, n, value });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw() -> RawRates {
        RawRates::default()
    }

    #[test]
    fn one_photon_absorption_rate() {
        assert_eq!(f1_absorption(0, &RawRates { d1a: 1.0, ..raw() }), 1.0);
        let r = RawRates { d1a: 1.0, d10a: 2.0, d12a: 0.5, ..raw() };
        assert_eq!(f1_absorption(3, &r), 9.5);
        for n in 0..10 {
            assert_eq!(f1_absorption(n, &raw()), 0.0);
        }
    }

    #[test]
    fn one_photon_emission_rate() {
        assert_eq!(f1_emission(0, &RawRates { d11e: 2.0, ..raw() }), 2.0);
        let r = RawRates { d1e: 1.0, w1e: vec![EmissionWeight { j: 0, w: 3.0 }], ..raw() };
        assert_eq!(f1_emission(1, &r), 2.5);
        let r = RawRates { d1e: 0.7, w1e: vec![EmissionWeight { j: 5, w: 2.0 }], ..raw() };
        assert!((f1_emission(10_000_000, &r) - 2.7).abs() < 1e-6);
    }

    #[test]
    fn saturated_two_photon_emission_rate() {
        assert_eq!(f2_emission(0, &RawRates { d2e: 2.0, ..raw() }), 1.0);
        assert_eq!(f2_emission(1, &RawRates { d2e: 6.0, ..raw() }), 1.0);
        let r = RawRates { d2e: 3.0, ..raw() };
        for n in 0..20 {
            assert!(f2_emission(n + 1, &r) < f2_emission(n, &r));
        }
    }

    #[test]
    fn scully_lamb_form() {
        assert_eq!(saturated_emission_rate(0, &SaturatedEmission { k: 2, d: 1.0, gamma: 0.0 }), 1.0);
        assert_eq!(saturated_emission_rate(0, &SaturatedEmission { k: 2, d: 1.0, gamma: 0.5 }), 0.5);
        let sat = SaturatedEmission { k: 2, d: 1e6, gamma: 1e6 };
        let lim = RawRates { d2e: 1.0, ..raw() };
        for n in 0..=20 {
            let a = saturated_emission_rate(n, &sat);
            let b = f2_emission(n, &lim);
            assert!(((a - b) / b).abs() < 1e-5, "n={n}");
        }
    }

    #[test]
    fn dimensionless_reduction() {
        let p = to_dimensionless(&RawRates { d1a: 2.0, d2a: 1.0, d1e: 1.0, d2e: 4.0, ..raw() }).unwrap();
        assert_eq!(p, DimensionlessParams { nu: 2.0, s: 0.5, sigma: 0.0, r: 2.0 });
        let p = to_dimensionless(&RawRates { d2a: 1.0, d2e: 1.0, ..raw() }).unwrap();
        assert_eq!(p, DimensionlessParams { nu: 0.0, s: 0.0, sigma: 0.0, r: 1.0 });
        assert!(matches!(
            to_dimensionless(&RawRates { d1a: 1.0, d2e: 1.0, ..raw() }),
            Err(RateError::NotDimensionless(_))
        ));
        assert!(to_dimensionless(&RawRates { d2a: 1.0, d1e: 1.0, ..raw() }).is_err());
        assert!(to_dimensionless(&RawRates { d2a: 1.0, d1a: 1.0, d10a: 0.1, ..raw() }).is_err());
    }

    #[test]
    fn validation_rejects_bad_coefficients() {
        assert!(RawRates { d1a: -1.0, ..raw() }.validate().is_err());
        assert!(RawRates { d1a: f64::NAN, ..raw() }.validate().is_err());
        let neg_j = RawRates { w1e: vec![EmissionWeight { j: -2, w: 1.0 }], ..raw() };
        assert_eq!(neg_j.validate(), Err(RateError::InvalidIndex(-2)));
        let j_one = RawRates { w1e: vec![EmissionWeight { j: 1, w: 1.0 }], ..raw() };
        assert_eq!(j_one.validate(), Err(RateError::InvalidIndex(1)));
        let dup = RawRates { w1e: vec![EmissionWeight { j: 3, w: 1.0 }, EmissionWeight { j: 3, w: 2.0 }], ..raw() };
        assert_eq!(dup.validate(), Err(RateError::DuplicateIndex(3)));
        assert_eq!(FamilyRates::from(raw()).validate(), Err(RateError::AllZero));
        assert!(SaturatedEmission { k: 0, d: 1.0, gamma: 0.0 }.validate().is_err());
    }

    #[test]
    fn dimensionless_rates_match_family_rates_scaled() {
        let rawr = RawRates { d1a: 3.0, d2a: 2.0, d1e: 1.5, d11e: 0.6, d2e: 8.0, ..raw() };
        let fam = FamilyRates::from(rawr.clone());
        let dim = to_dimensionless(&rawr).unwrap();
        for i in 0..4 {
            for n in 0..15 {
                let a = fam.rate(i, n) / rawr.d2a;
                let b = dim.rate(i, n);
                assert!((a - b).abs() < 1e-14 * a.abs().max(1.0), "channel {i} n={n}");
            }
        }
    }
}
