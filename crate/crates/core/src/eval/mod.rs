//! Evaluation of `gamma(a, z)`, `Gamma(a, z)`, `P(a, z)` and `Q(a, z)` for
//! real `a, z > 0` from the uniform expansions.
//!
//! The function on the side of the transition point where its expansion is
//! valid is computed first (`Gamma` when `z > a`, `gamma` when `z < a`) and
//! its partner follows from `P + Q = 1`. Prefactors are handled in log space
//! so that `a = z = 1e6` does not overflow.

mod diagonal;
mod expansion;
mod transition;

use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Convention, DINGLE_CONVENTION};
use crate::precision::{lost_bits, PrecisionCtx, GUARD_BITS};
use expansion::{expand, Expansion, Scheme};

pub use diagonal::{q_diagonal, DIAGONAL_ADAPTIVE_CAP, DIAGONAL_FIXED_CAP};
pub use expansion::ADAPTIVE_CAP;
pub use transition::{
    d0, dk_fixed_precision, dk_sequence, dk_sequence_with, erfcx, transition_coefficient_fixed,
    transition_coefficients, DEFAULT_CHI_STAR,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// `gamma(a, z)`
    GammaLower,
    /// `Gamma(a, z)`
    GammaUpper,
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    /// Inverse powers of `sqrt(z)`.
    Paris,
    /// Inverse powers of `sqrt(a)`.
    Dingle,
    /// The `E_k` series for `Q(a, a)`.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    UpperFirst,
    LowerFirst,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truncation {
    /// Keep terms `0..=m`.
    Fixed(u32),
    /// Stop once a term drops below the target precision or starts to grow.
    Adaptive,
}

impl From<u32> for Truncation {
    fn from(m: u32) -> Self {
        Truncation::Fixed(m)
    }
}

/// Side of an incomplete gamma split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

macro_rules! string_enum {
    ($ty:ident { $($variant:ident => [$($name:literal),+]),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($($name)|+ => Ok($ty::$variant),)+
                    other => Err(Error::Invalid(format!(
                        concat!("unknown ", stringify!($ty), " {:?}"),
                        other
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                match self {
                    $($ty::$variant => f.write_str([$($name),+][0]),)+
                }
            }
        }
    };
}

string_enum!(Target {
    GammaLower => ["lower", "gamma_lower"],
    GammaUpper => ["upper", "gamma_upper"],
    P => ["P", "p"],
    Q => ["Q", "q"],
});
string_enum!(Method {
    Auto => ["auto"],
    Paris => ["paris"],
    Dingle => ["dingle"],
    Diagonal => ["diagonal"],
});
string_enum!(Branch {
    UpperFirst => ["upper_first"],
    LowerFirst => ["lower_first"],
    Diagonal => ["diagonal"],
});

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRequest {
    pub a: f64,
    pub z: f64,
    pub target: Target,
    pub method: Method,
    pub m: Truncation,
    pub precision: PrecisionCtx,
    /// Largest `|chi|` at which the diagonal series may stand in for `Q(a, z)`.
    /// `None` means `2^-bits`.
    pub diagonal_threshold: Option<f64>,
}

impl EvalRequest {
    pub fn new(a: f64, z: f64, target: Target) -> Self {
        EvalRequest {
            a,
            z,
            target,
            method: Method::Auto,
            m: Truncation::Adaptive,
            precision: PrecisionCtx::default(),
            diagonal_threshold: None,
        }
    }

    pub fn method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn truncation(mut self, m: impl Into<Truncation>) -> Self {
        self.m = m.into();
        self
    }

    pub fn precision(mut self, ctx: PrecisionCtx) -> Self {
        self.precision = ctx;
        self
    }

    pub fn diagonal_threshold(mut self, chi: f64) -> Self {
        self.diagonal_threshold = Some(chi);
        self
    }

    fn threshold(&self) -> f64 {
        self.diagonal_threshold
            .unwrap_or_else(|| 2f64.powi(-(self.precision.bits() as i32)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    /// Rounded to the requested precision.
    pub value: Float,
    pub target: Target,
    pub branch: Branch,
    /// Method that produced the value (never `Auto`).
    pub method: Method,
    /// `chi = (z - a)/sqrt(z)`, or `xi = (z - a)/sqrt(a)` for the `sqrt(a)` expansion.
    pub transition: f64,
    pub m_used: u32,
    pub precision_bits_used: u32,
    /// Heuristic relative error: the next two omitted terms over the value, plus one
    /// rounding unit of the target precision. Not a bound.
    pub err_estimate: f64,
}

impl EvalResult {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn check_domain(a: f64, z: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!(
            "a must be finite and positive, got {a}"
        )));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!(
            "z must be finite and positive, got {z}"
        )));
    }
    Ok(())
}

fn rounding_unit(bits: u32) -> f64 {
    2f64.powi(1 - bits as i32)
}

fn finish(
    exp: Expansion,
    target: Target,
    branch: Branch,
    method: Method,
    ctx: &PrecisionCtx,
) -> EvalResult {
    EvalResult {
        value: Float::with_val(ctx.bits(), exp.log_value.exp_ref()),
        target,
        branch,
        method,
        transition: exp.transition,
        m_used: exp.m_used,
        precision_bits_used: exp.bits_used,
        err_estimate: exp.rel_omitted + rounding_unit(ctx.bits()),
    }
}

/// `Gamma(a, z)` from the `sqrt(z)` expansion. Needs `z >= a`.
pub fn gamma_upper_paris(
    a: f64,
    z: f64,
    m: impl Into<Truncation>,
    ctx: &PrecisionCtx,
) -> Result<EvalResult> {
    check_domain(a, z)?;
    if z < a {
        return Err(Error::Branch(format!(
            "Gamma(a, z) expansion needs z >= a (got a = {a}, z = {z}); use gamma_lower_paris"
        )));
    }
    let exp = expand(Scheme::Paris, a, z, false, m.into(), ctx)?;
    Ok(finish(
        exp,
        Target::GammaUpper,
        Branch::UpperFirst,
        Method::Paris,
        ctx,
    ))
}

/// `gamma(a, z)` from the `sqrt(z)` expansion. Needs `z <= a`.
pub fn gamma_lower_paris(
    a: f64,
    z: f64,
    m: impl Into<Truncation>,
    ctx: &PrecisionCtx,
) -> Result<EvalResult> {
    check_domain(a, z)?;
    if z > a {
        return Err(Error::Branch(format!(
            "gamma(a, z) expansion needs z <= a (got a = {a}, z = {z}); use gamma_upper_paris"
        )));
    }
    let exp = expand(Scheme::Paris, a, z, true, m.into(), ctx)?;
    Ok(finish(
        exp,
        Target::GammaLower,
        Branch::LowerFirst,
        Method::Paris,
        ctx,
    ))
}

/// `Gamma(a+1, z)` (`Side::Upper`, needs `z >= a`) or `gamma(a+1, z)`
/// (`Side::Lower`, needs `z <= a`) from the `sqrt(a)` expansion
/// `z^{a+1} e^{-z} a^{-1/2} { d0(+-xi) sum A^_k a^{-k/2} +- sum B^_k a^{-k/2} }`.
pub fn gamma_dingle(
    a: f64,
    z: f64,
    m: impl Into<Truncation>,
    which: Side,
    ctx: &PrecisionCtx,
) -> Result<EvalResult> {
    gamma_dingle_with(a, z, m, which, DINGLE_CONVENTION, ctx)
}

/// [`gamma_dingle`] with the coefficients assembled under `convention`.
pub fn gamma_dingle_with(
    a: f64,
    z: f64,
    m: impl Into<Truncation>,
    which: Side,
    convention: Convention,
    ctx: &PrecisionCtx,
) -> Result<EvalResult> {
    check_domain(a, z)?;
    let (lower, target, branch) = match which {
        Side::Upper if z < a => {
            return Err(Error::Branch(format!(
                "Gamma(a+1, z) expansion needs z >= a (got a = {a}, z = {z})"
            )))
        }
        Side::Lower if z > a => {
            return Err(Error::Branch(format!(
                "gamma(a+1, z) expansion needs z <= a (got a = {a}, z = {z})"
            )))
        }
        Side::Upper => (false, Target::GammaUpper, Branch::UpperFirst),
        Side::Lower => (true, Target::GammaLower, Branch::LowerFirst),
    };
    let exp = expand(Scheme::Dingle(convention), a, z, lower, m.into(), ctx)?;
    Ok(finish(exp, target, branch, Method::Dingle, ctx))
}

/// Dispatches a request: diagonal series at `z = a`, otherwise the expansion
/// valid on the request's side of the transition point, with the partner
/// function derived from `P + Q = 1`.
pub fn eval(req: &EvalRequest) -> Result<EvalResult> {
    check_domain(req.a, req.z)?;
    let ctx = req.precision;
    let chi = (req.z - req.a) / req.z.sqrt();
    let method = match req.method {
        Method::Auto if chi.abs() <= req.threshold() => Method::Diagonal,
        Method::Auto => Method::Paris,
        Method::Diagonal if chi.abs() > req.threshold() => {
            return Err(Error::Branch(format!(
                "diagonal series needs |chi| <= {:e}, got chi = {chi:e}",
                req.threshold()
            )))
        }
        other => other,
    };

    let mut bits = ctx.bits();
    loop {
        let work = ctx.retarget(bits)?;
        let (res, lost) = eval_at(req, method, &work)?;
        if res.precision_bits_used >= ctx.bits() + lost + 8 {
            return Ok(EvalResult {
                value: Float::with_val(ctx.bits(), &res.value),
                err_estimate: res.err_estimate.max(rounding_unit(ctx.bits())),
                ..res
            });
        }
        // The identity-derived partner cancelled more than the guard covers.
        let next = ctx.bits() + lost + GUARD_BITS;
        if next > ctx.max_bits() {
            return Err(Error::PrecisionCeiling {
                required: next,
                ceiling: ctx.max_bits(),
            });
        }
        bits = next;
    }
}

/// Evaluates at `work` precision; also returns bits lost deriving the partner.
fn eval_at(req: &EvalRequest, method: Method, work: &PrecisionCtx) -> Result<(EvalResult, u32)> {
    let (a, z) = (req.a, req.z);
    if method == Method::Diagonal {
        let q = q_diagonal(a, req.m, work)?;
        let lnga = ln_gamma(a, q.precision_bits_used);
        return derive(req.target, Target::Q, q, &lnga, req.precision.bits());
    }

    // Which function the expansion yields, and at which `a` it is evaluated.
    let (scheme, a_exp) = match method {
        Method::Paris => (Scheme::Paris, a),
        Method::Dingle => {
            if a <= 1.0 {
                return Err(Error::Domain(format!(
                    "the sqrt(a) expansion gives Gamma(a'+1, z) and needs a = a' + 1 > 1, got a = {a}"
                )));
            }
            (Scheme::Dingle(DINGLE_CONVENTION), a - 1.0)
        }
        Method::Auto | Method::Diagonal => unreachable!("resolved by eval"),
    };
    let lower = z < a_exp;
    let exp = expand(scheme, a_exp, z, lower, req.m, work)?;
    let w = exp.bits_used;
    let lnga = ln_gamma(a, w);
    let (first, branch) = if lower {
        (Target::GammaLower, Branch::LowerFirst)
    } else {
        (Target::GammaUpper, Branch::UpperFirst)
    };
    // Keep the full working precision for the derivations.
    let full = Float::with_val(w, exp.log_value.exp_ref());
    let mut res = finish(exp, first, branch, method, work);
    res.value = full;
    derive(req.target, first, res, &lnga, req.precision.bits())
}

fn ln_gamma(a: f64, w: u32) -> Float {
    Float::with_val(w, a).ln_gamma()
}

/// Turns the value of `have` (unnormalized or normalized) into `want`,
/// rounded to `out_bits`.
///
/// A partner from `P + Q = 1` is taken from the primary value already rounded
/// to `out_bits`, so the pair sums to exactly 1 in that precision.
fn derive(
    want: Target,
    have: Target,
    mut res: EvalResult,
    lnga: &Float,
    out_bits: u32,
) -> Result<(EvalResult, u32)> {
    let w = res.value.prec().max(lnga.prec());
    let gamma_a = Float::with_val(w, lnga.exp_ref());
    let one = Float::with_val(w, 1u32);

    // Normalized value of `have` and which normalized side it is on.
    let (norm, upper) = match have {
        Target::GammaUpper => (Float::with_val(w, &res.value / &gamma_a), true),
        Target::GammaLower => (Float::with_val(w, &res.value / &gamma_a), false),
        Target::Q => (Float::with_val(w, &res.value), true),
        Target::P => (Float::with_val(w, &res.value), false),
    };
    let wants_upper = matches!(want, Target::GammaUpper | Target::Q);
    let mut lost = 0;
    let norm_want = if wants_upper == upper {
        norm
    } else {
        let rounded = Float::with_val(out_bits, &norm);
        let partner = Float::with_val(w, &one - &rounded);
        lost = lost_bits(&one, &partner, w);
        if !partner.is_zero() {
            let ratio = Float::with_val(64, &norm / &partner).abs().to_f64();
            res.err_estimate *= ratio.max(1.0);
        }
        partner
    };
    res.value = match want {
        Target::P | Target::Q => Float::with_val(out_bits, &norm_want),
        Target::GammaUpper | Target::GammaLower => {
            Float::with_val(out_bits, Float::with_val(w, &norm_want * &gamma_a))
        }
    };
    res.target = want;
    Ok((res, lost))
}
