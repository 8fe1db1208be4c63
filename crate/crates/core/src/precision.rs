//! Working-precision contract shared by the evaluator and the oracle.

use rug::Float;

use crate::error::{Error, Result};

/// IEEE double.
pub const MIN_BITS: u32 = 53;
/// Escalation ceiling used when `IGAMMA_MAX_BITS` is not set.
pub const DEFAULT_MAX_BITS: u32 = 1024;
/// Environment variable overriding the escalation ceiling.
pub const MAX_BITS_ENV: &str = "IGAMMA_MAX_BITS";

pub(crate) const GUARD_BITS: u32 = 32;

/// Target precision of a result plus the ceiling escalation may climb to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionCtx {
    bits: u32,
    max_bits: u32,
}

impl PrecisionCtx {
    pub fn new(bits: u32, max_bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::Invalid(format!(
                "precision must be at least {MIN_BITS} bits, got {bits}"
            )));
        }
        if bits > max_bits {
            return Err(Error::PrecisionCeiling {
                required: bits,
                ceiling: max_bits,
            });
        }
        Ok(PrecisionCtx { bits, max_bits })
    }

    /// `bits` of target precision under the environment ceiling.
    pub fn with_bits(bits: u32) -> Result<Self> {
        Self::new(bits, ceiling_from_env().max(bits.min(DEFAULT_MAX_BITS)))
    }

    /// Double precision under the environment ceiling.
    pub fn double() -> Self {
        PrecisionCtx {
            bits: MIN_BITS,
            max_bits: ceiling_from_env().max(MIN_BITS),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    /// Same ceiling, different target.
    pub fn retarget(&self, bits: u32) -> Result<Self> {
        Self::new(bits, self.max_bits)
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self::double()
    }
}

/// Ceiling from `IGAMMA_MAX_BITS`, falling back to [`DEFAULT_MAX_BITS`].
pub fn ceiling_from_env() -> u32 {
    std::env::var(MAX_BITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&b| b >= MIN_BITS)
        .unwrap_or(DEFAULT_MAX_BITS)
}

/// Bits cancelled when a quantity of size `scale` collapses to `result`.
/// A zero result counts as total loss at precision `w`.
pub(crate) fn lost_bits(scale: &Float, result: &Float, w: u32) -> u32 {
    if result.is_zero() {
        return w;
    }
    match (scale.get_exp(), result.get_exp()) {
        (Some(s), Some(r)) if s > r => (s - r) as u32,
        _ => 0,
    }
}

/// Runs `attempt` at a working precision that starts at `bits + GUARD_BITS`
/// and doubles until the cancellation it reports leaves `bits + GUARD_BITS`
/// good bits. Returns the value and the working precision used.
pub(crate) fn escalate<T>(
    ctx: &PrecisionCtx,
    mut attempt: impl FnMut(u32) -> Result<(T, u32)>,
) -> Result<(T, u32)> {
    let target = ctx.bits() + GUARD_BITS;
    let mut w = target;
    loop {
        let (value, lost) = attempt(w)?;
        let needed = target.saturating_add(lost);
        if needed <= w {
            return Ok((value, w));
        }
        if w >= ctx.max_bits() {
            return Err(Error::PrecisionCeiling {
                required: needed,
                ceiling: ctx.max_bits(),
            });
        }
        let next = (2 * w).max(needed + GUARD_BITS);
        w = next.div_ceil(32) * 32;
        w = w.min(ctx.max_bits());
    }
}
