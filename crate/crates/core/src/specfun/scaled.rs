use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A positive (or zero) real stored as `mantissa * 2^exponent`.
///
/// The mantissa is kept in `[1, 2)` (or exactly zero), so values far outside
/// the `f64` range, such as `e^400`, can be carried through products and
/// ratios without overflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScaledReal {
    mantissa: f64,
    exponent: i64,
}

const MANTISSA_MASK: u64 = (1u64 << 52) - 1;
const ONE_BITS: u64 = 0x3ff0_0000_0000_0000;

/// Splits a finite nonzero `x` into `(m, e)` with `|m|` in `[1, 2)` and `x = m * 2^e`.
fn split(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x != 0.0);
    let mut x = x;
    let mut bias = 0;
    if x.abs() < f64::MIN_POSITIVE {
        // subnormal: lift into the normal range first
        x *= 2f64.powi(64);
        bias = -64;
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let sign = bits & (1u64 << 63);
    let mantissa = f64::from_bits(sign | ONE_BITS | (bits & MANTISSA_MASK));
    (mantissa, exp + bias)
}

/// Computes `m * 2^e` with a single rounding at most, saturating to 0 or infinity.
fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    if e > 1100 {
        return m.signum() * f64::INFINITY;
    }
    if e < -1200 {
        return 0.0 * m.signum();
    }
    // two steps keep each factor representable
    let half = e / 2;
    m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

impl LogScaledReal {
    pub const ZERO: LogScaledReal = LogScaledReal { mantissa: 0.0, exponent: 0 };
    pub const ONE: LogScaledReal = LogScaledReal { mantissa: 1.0, exponent: 0 };

    /// Builds from a finite nonnegative `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite() && x >= 0.0, "LogScaledReal holds finite nonnegative values, got {x}");
        Self::from_parts(x, 0)
    }

    /// Builds `value * 2^exponent` and normalizes.
    pub fn from_parts(value: f64, exponent: i64) -> Self {
        if value == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = split(value);
        LogScaledReal { mantissa: m, exponent: e + exponent }
    }

    /// Builds `e^ln_value`.
    pub fn from_ln(ln_value: f64) -> Self {
        if ln_value == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let log2 = ln_value / std::f64::consts::LN_2;
        let e = log2.floor();
        let frac = (ln_value - e * std::f64::consts::LN_2).exp();
        Self::from_parts(frac, e as i64)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// Natural logarithm; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// Plain value, or `None` when it does not fit in an `f64`.
    pub fn to_f64(&self) -> Option<f64> {
        let v = ldexp(self.mantissa, self.exponent);
        v.is_finite().then_some(v)
    }

    /// Plain value, saturating to infinity or zero.
    pub fn to_f64_saturating(&self) -> f64 {
        ldexp(self.mantissa, self.exponent)
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.mantissa * other.mantissa, self.exponent + other.exponent)
    }

    pub fn div(self, other: Self) -> Self {
        assert!(!other.is_zero(), "division by zero LogScaledReal");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.mantissa / other.mantissa, self.exponent - other.exponent)
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= other.exponent { (self, other) } else { (other, self) };
        let shift = small.exponent - big.exponent;
        Self::from_parts(big.mantissa + ldexp(small.mantissa, shift), big.exponent)
    }

    pub fn scale_f64(self, factor: f64) -> Self {
        assert!(factor >= 0.0 && factor.is_finite());
        Self::from_parts(self.mantissa * factor, self.exponent)
    }

    /// Ratio `self / other` as a plain `f64` (saturating).
    pub fn ratio(self, other: Self) -> f64 {
        self.div(other).to_f64_saturating()
    }
}

impl PartialOrd for LogScaledReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            _ => match self.exponent.cmp(&other.exponent) {
                Ordering::Equal => self.mantissa.partial_cmp(&other.mantissa),
                ord => Some(ord),
            },
        }
    }
}

impl fmt::Display for LogScaledReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_f64() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}*2^{}", self.mantissa, self.exponent),
        }
    }
}
