use num_complex::Complex64;

use super::{LogScaledReal, SpecFunError};

/// Relative size of the last term at which the series is considered converged.
const TERM_TOLERANCE: f64 = 1e-17;
/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 20_000;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BITS: i64 = 800;

fn check_domain(a: f64, c: f64, x: f64) -> Result<(), SpecFunError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(SpecFunError::Domain(format!("Kummer parameter a must be positive, got {a}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(SpecFunError::Domain(format!("Kummer parameter c must be positive, got {c}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(SpecFunError::Domain(format!("Kummer argument x must be nonnegative, got {x}")));
    }
    Ok(())
}

/// True once the ratio of consecutive terms is decreasing for all later `k`.
///
/// `(a+k)/((c+k)(k+1))` is nonincreasing for `k >= sqrt(c)` whatever `a`.
fn past_peak(k: usize, c: f64, ratio: f64) -> bool {
    ratio < 1.0 && (k as f64) * (k as f64) >= c
}

/// Kummer's confluent hypergeometric function `Φ(a; c; x)` for `a, c > 0`, `x >= 0`,
/// in log-scaled form.
///
/// All terms are positive, so the partial sums converge monotonically; the loop stops
/// once the geometric bound on the remaining tail falls below `1e-17` of the sum.
pub fn kummer_phi_log(a: f64, c: f64, x: f64) -> Result<LogScaledReal, SpecFunError> {
    check_domain(a, c, x)?;
    if x == 0.0 {
        return Ok(LogScaledReal::ONE);
    }
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut scale = 0i64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) / (c + kf) * x / (kf + 1.0);
        term *= ratio;
        sum += term;
        if sum > RESCALE_ABOVE {
            let f = 2f64.powi(-(RESCALE_BITS as i32));
            sum *= f;
            term *= f;
            scale += RESCALE_BITS;
        }
        let next_ratio = (a + kf + 1.0) / (c + kf + 1.0) * x / (kf + 2.0);
        if past_peak(k + 1, c, next_ratio) {
            let tail = term * next_ratio / (1.0 - next_ratio);
            if tail <= TERM_TOLERANCE * sum {
                return Ok(LogScaledReal::from_parts(sum, scale));
            }
        }
    }
    Err(SpecFunError::Convergence { terms: MAX_TERMS, a, c, x })
}

/// Kummer's confluent hypergeometric function `Φ(a; c; x)` as a plain `f64`.
pub fn kummer_phi(a: f64, c: f64, x: f64) -> Result<f64, SpecFunError> {
    let v = kummer_phi_log(a, c, x)?;
    v.to_f64().ok_or(SpecFunError::Overflow { a, c, x })
}

/// `Φ(a; c; z)` for complex `z`, returned as `(m, ln_scale)` with value `m * e^ln_scale`.
///
/// Used for contour evaluation of generating functions. Terms are summed directly, so
/// the absolute error is relative to `Φ(a; c; |z|)`, which bounds every partial sum.
pub(crate) fn kummer_phi_complex(a: f64, c: f64, z: Complex64) -> Result<(Complex64, f64), SpecFunError> {
    let x = z.norm();
    check_domain(a, c, x)?;
    if x == 0.0 {
        return Ok((Complex64::new(1.0, 0.0), 0.0));
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut mag = 1.0f64;
    let mut mag_sum = 1.0f64;
    let mut ln_scale = 0.0f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let coef = (a + kf) / (c + kf) / (kf + 1.0);
        term *= z * coef;
        mag *= x * coef;
        sum += term;
        mag_sum += mag;
        if mag_sum > RESCALE_ABOVE {
            let f = 2f64.powi(-(RESCALE_BITS as i32));
            sum *= f;
            term *= f;
            mag *= f;
            mag_sum *= f;
            ln_scale += RESCALE_BITS as f64 * std::f64::consts::LN_2;
        }
        let next_ratio = (a + kf + 1.0) / (c + kf + 1.0) * x / (kf + 2.0);
        if past_peak(k + 1, c, next_ratio) {
            let tail = mag * next_ratio / (1.0 - next_ratio);
            if tail <= TERM_TOLERANCE * mag_sum {
                return Ok((sum, ln_scale));
            }
        }
    }
    Err(SpecFunError::Convergence { terms: MAX_TERMS, a, c, x })
}
