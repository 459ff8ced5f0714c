//! Stationary photon-number statistics of a single field mode driven by competing one- and
//! two-photon absorption and emission, with completely saturated two-photon emission.
//!
//! The closed-form generating function ([`gf`]) is cross-checked against a truncated
//! master-equation solver ([`steady`]); [`wigner`] covers the phase-averaged even/odd
//! states that appear when one-photon processes are weak.

pub mod cli;
pub mod distribution;
pub mod gf;
mod linalg;
pub mod rates;
pub mod specfun;
pub mod steady;
pub mod wigner;

pub use distribution::PhotonDistribution;
pub use gf::{closed_form, photon_probabilities, GfClosedForm, PaeosParams};
pub use rates::{DimensionlessParams, FamilyRates, GeneratorMatrix, RawRates};
pub use steady::{choose_truncation, steady_state};
