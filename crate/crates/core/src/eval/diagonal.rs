//! `Q(a, a) ~ 1/2 - (2 pi a)^{-1/2} sum_k E_k a^{-k}`.

use std::sync::OnceLock;

use rug::float::Constant;
use rug::{Float, Rational};

use super::{rounding_unit, Branch, EvalResult, Method, Target, Truncation};
use crate::error::{Error, Result};
use crate::exact::e_coeffs;
use crate::precision::{PrecisionCtx, GUARD_BITS};

/// Default adaptive cap; `E_0..=E_7` is the classical published list.
pub const DIAGONAL_ADAPTIVE_CAP: u32 = 7;
/// Largest fixed `m` (one more `E_k` is needed for the error estimate, and
/// `E_k` needs `A`/`B` up to `2k + 1 <= 30`).
pub const DIAGONAL_FIXED_CAP: u32 = 13;

fn e_table() -> &'static [Rational] {
    static E: OnceLock<Vec<Rational>> = OnceLock::new();
    E.get_or_init(|| e_coeffs(DIAGONAL_FIXED_CAP as usize + 1))
}

/// `Q(a, a)` from the `E_k` series. `P(a, a) = 1 - Q(a, a)`.
pub fn q_diagonal(a: f64, m: impl Into<Truncation>, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!(
            "a must be finite and positive, got {a}"
        )));
    }
    let trunc = m.into();
    if let Truncation::Fixed(m) = trunc {
        if m > DIAGONAL_FIXED_CAP {
            return Err(Error::KmaxCap {
                requested: m as usize,
                cap: DIAGONAL_FIXED_CAP as usize,
            });
        }
    }
    let w = ctx.bits() + GUARD_BITS;
    let e = e_table();
    let af = Float::with_val(w, a);
    let inv_a = Float::with_val(w, af.recip_ref());
    let tol = Float::with_val(64, Float::i_exp(1, -(ctx.bits() as i32)));

    // terms[k] = E_k a^{-k}
    let n = match trunc {
        Truncation::Fixed(m) => m as usize + 1,
        Truncation::Adaptive => DIAGONAL_ADAPTIVE_CAP as usize + 1,
    };
    let mut terms = Vec::with_capacity(n + 1);
    let mut pow = Float::with_val(w, 1u32);
    for ek in &e[..=n] {
        terms.push(Float::with_val(w, ek * &pow));
        pow *= &inv_a;
    }

    let m_used = match trunc {
        Truncation::Fixed(m) => m as usize,
        Truncation::Adaptive => {
            // Smallest first omitted term, or the first negligible one.
            let first = Float::with_val(64, terms[0].abs_ref());
            let mut chosen = 0;
            let mut best = Float::with_val(64, terms[1].abs_ref());
            for (k, term) in terms.iter().enumerate().take(n + 1).skip(1) {
                let mag = Float::with_val(64, term.abs_ref());
                if mag < best {
                    chosen = k - 1;
                    best = mag.clone();
                }
                if mag <= Float::with_val(64, &tol * &first) {
                    chosen = k - 1;
                    break;
                }
            }
            chosen
        }
    };

    let mut sum = Float::new(w);
    for t in &terms[..=m_used] {
        sum += t;
    }
    let two_pi_a = Float::with_val(w, Constant::Pi) * 2u32 * &af;
    let scale = two_pi_a.sqrt().recip();
    let q = Float::with_val(w, 0.5f64) - Float::with_val(w, &sum * &scale);
    let omitted = Float::with_val(w, &terms[m_used + 1] * &scale).abs();
    let rel = Float::with_val(64, omitted / &q).to_f64();

    Ok(EvalResult {
        value: Float::with_val(ctx.bits(), &q),
        target: Target::Q,
        branch: Branch::Diagonal,
        method: Method::Diagonal,
        transition: 0.0,
        m_used: m_used as u32,
        precision_bits_used: w,
        err_estimate: rel + rounding_unit(ctx.bits()),
    })
}
