//! Incomplete gamma functions `gamma(a, z)`, `Gamma(a, z)`, `P` and `Q` from
//! uniform asymptotic expansions around the transition point `z = a`.
//!
//! - [`exact`] generates every coefficient family as exact rationals.
//! - [`eval`] sums the expansions in multiprecision with automatic escalation.
//! - [`oracle`] gives independent reference values.
//! - [`accuracy`], [`verify`] and [`cli`] drive the above.

pub mod accuracy;
pub mod cli;
pub mod error;
pub mod eval;
pub mod exact;
pub mod oracle;
pub mod precision;
pub mod verify;

pub use error::{Error, Result};
pub use precision::PrecisionCtx;
