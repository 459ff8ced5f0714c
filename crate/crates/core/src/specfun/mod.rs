//! Special functions used throughout the crate: Kummer's confluent hypergeometric
//! function, `J0`, exponentially scaled `I0`, and Laguerre polynomials.
//!
//! Everything here is pure and reentrant.

mod bessel;
mod kummer;
mod laguerre;
mod scaled;

pub use bessel::{bessel_i0_scaled, bessel_j0};
pub(crate) use kummer::kummer_phi_complex;
pub use kummer::{kummer_phi, kummer_phi_log, MAX_TERMS};
pub use laguerre::{laguerre, laguerre_table};
pub use scaled::LogScaledReal;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("Φ({a}; {c}; {x}) exceeds the f64 range; use kummer_phi_log")]
    Overflow { a: f64, c: f64, x: f64 },
    #[error("Kummer series Φ({a}; {c}; {x}) did not converge within {terms} terms")]
    Convergence { terms: usize, a: f64, c: f64, x: f64 },
}
