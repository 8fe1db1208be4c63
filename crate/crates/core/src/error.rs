use thiserror::Error;

/// Errors raised by coefficient generation, the evaluator and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested expansion is not valid on this side of the transition point.
    #[error("branch error: {0}")]
    Branch(String),

    #[error("precision ceiling exceeded: {required} bits required but the ceiling is {ceiling} bits (raise IGAMMA_MAX_BITS)")]
    PrecisionCeiling { required: u32, ceiling: u32 },

    #[error(
        "k_max = {requested} exceeds the cap of {cap}; pass an explicit override to go higher"
    )]
    KmaxCap { requested: usize, cap: usize },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("I/O error: {0}")]
    Io(String),

    /// The reader of our output went away (e.g. `| head`).
    #[error("output closed")]
    OutputClosed,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Error::OutputClosed
        } else {
            Error::Io(e.to_string())
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
