use std::sync::Arc;

use rug::Float;

use super::transition::{d0_at, transition_at};
use super::Truncation;
use crate::error::{Error, Result};
use crate::exact::{coeff_set_dingle_with, coeff_set_paris, CoeffSet, Convention, KMAX_CAP};
use crate::precision::{escalate, lost_bits, PrecisionCtx, GUARD_BITS};

/// Largest `m` the adaptive rule may reach for the `A_k`/`B_k` expansions.
pub const ADAPTIVE_CAP: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Scheme {
    /// Inverse powers of `sqrt(z)` in `chi = (z - a)/sqrt(z)`.
    Paris,
    /// Inverse powers of `sqrt(a)` in `xi = (z - a)/sqrt(a)`; yields
    /// `Gamma(a+1, z)` / `gamma(a+1, z)`.
    Dingle(Convention),
}

/// Outcome of summing one expansion in log form.
pub(crate) struct Expansion {
    /// Log of the unnormalized incomplete gamma value, at `bits_used`.
    pub log_value: Float,
    pub transition: f64,
    pub m_used: u32,
    /// Size of the next two omitted terms over the retained sum.
    pub rel_omitted: f64,
    pub bits_used: u32,
}

fn coeff_set(scheme: Scheme, k_max: usize) -> Arc<CoeffSet> {
    match scheme {
        Scheme::Paris => coeff_set_paris(k_max),
        Scheme::Dingle(conv) => coeff_set_dingle_with(k_max, conv),
    }
}

/// Sums the expansion for the upper (`lower == false`) or lower function.
///
/// The lower variant evaluates at `x = -t >= 0` and flips odd terms:
/// `A_k(t) d0(-t) -/+ B_k(t) = (-1)^k C_k(-t)` by the parity of `A_k`, `B_k`.
pub(crate) fn expand(
    scheme: Scheme,
    a: f64,
    z: f64,
    lower: bool,
    trunc: Truncation,
    ctx: &PrecisionCtx,
) -> Result<Expansion> {
    let requested = match trunc {
        Truncation::Fixed(m) => m as usize + 1,
        Truncation::Adaptive => ADAPTIVE_CAP as usize + 1,
    };
    if requested > KMAX_CAP {
        return Err(Error::KmaxCap {
            requested,
            cap: KMAX_CAP,
        });
    }
    // One spare term beyond the first omitted one feeds the error estimate.
    let n_terms = (requested + 1).min(KMAX_CAP);
    let set = coeff_set(scheme, n_terms);
    let tol = Float::with_val(64, Float::i_exp(1, -(ctx.bits() as i32)));

    let ((log_value, transition, m_used, rel_omitted), bits_used) = escalate(ctx, |w| {
        let af = Float::with_val(w, a);
        let zf = Float::with_val(w, z);
        let large = match scheme {
            Scheme::Paris => zf.clone(),
            Scheme::Dingle(_) => af.clone(),
        };
        let root = Float::with_val(w, large.sqrt_ref());
        let t = Float::with_val(w, &zf - &af) / &root;
        let transition = t.to_f64();
        let x = Float::with_val(w, t.abs_ref());
        let d0x = d0_at(&x)?;
        let (c, lost_c) = transition_at(&set, &x, &d0x, n_terms);

        let inv_root = Float::with_val(w, root.recip_ref());
        let mut terms = Vec::with_capacity(n_terms + 1);
        let mut pow = Float::with_val(w, 1u32);
        for (k, ck) in c.iter().enumerate() {
            let mut term = Float::with_val(w, ck * &pow);
            if lower && k % 2 == 1 {
                term = -term;
            }
            terms.push(term);
            pow *= &inv_root;
        }

        let (m_used, omitted) = choose_order(&terms, trunc, &tol);
        let mut sum = Float::new(w);
        let mut biggest = Float::new(w);
        for term in &terms[..=m_used] {
            sum += term;
            biggest = biggest.max(&Float::with_val(w, term.abs_ref()));
        }
        let lost_terms = lost_c[..=m_used + 1].iter().copied().max().unwrap_or(0);
        let lost = lost_terms.max(lost_bits(&biggest, &sum, w));
        if sum.is_sign_negative() || sum.is_zero() {
            if ctx.bits() + GUARD_BITS + lost > w {
                // Cancellation garbage; the caller escalates and retries.
                return Ok(((Float::new(w), transition, m_used as u32, f64::NAN), lost));
            }
            return Err(Error::NonConvergence {
                what: "asymptotic sum (non-positive partial sum)",
                iterations: m_used + 1,
            });
        }
        let rel = omitted / Float::with_val(64, &sum);
        let ln_z = Float::with_val(w, zf.ln_ref());
        let prefactor = match scheme {
            // (a - 1/2) ln z - z
            Scheme::Paris => Float::with_val(w, &af - 0.5f64) * &ln_z - &zf,
            // (a + 1) ln z - (1/2) ln a - z
            Scheme::Dingle(_) => {
                Float::with_val(w, &af + 1u32) * &ln_z
                    - Float::with_val(w, af.ln_ref()) / 2u32
                    - &zf
            }
        };
        let log_value = prefactor + sum.ln();
        Ok(((log_value, transition, m_used as u32, rel.to_f64()), lost))
    })?;

    Ok(Expansion {
        log_value,
        transition,
        m_used,
        rel_omitted,
        bits_used,
    })
}

/// Picks the truncation order and returns it with the size of the omitted
/// tail.
///
/// Adaptive: the order whose omitted tail, measured as the larger of the next
/// two terms, is smallest; the scan ends early once a term is negligible. Odd
/// and even terms of these series often differ in size, so a single small
/// term is not trusted on its own.
fn choose_order(terms: &[Float], trunc: Truncation, tol: &Float) -> (usize, Float) {
    let mag = |k: usize| Float::with_val(64, terms[k].abs_ref());
    let last = terms.len() - 1;
    // Reported size of the omitted tail: the next two terms together.
    let omitted = |m: usize| {
        let next = mag(m + 1);
        if m + 2 <= last {
            next + mag(m + 2)
        } else {
            next
        }
    };
    if let Truncation::Fixed(m) = trunc {
        let m = m as usize;
        return (m, omitted(m));
    }
    // Orders up to `last - 2`, so each candidate has two omitted terms.
    let tail = |m: usize| mag(m + 1).max(&mag(m + 2));
    let mut partial = mag(0);
    let mut best = 0;
    let mut best_tail = tail(0);
    for k in 1..last {
        let t = mag(k);
        if t <= Float::with_val(64, tol * &partial) {
            return (k - 1, omitted(k - 1));
        }
        partial += &t;
        if k + 2 <= last {
            let candidate = tail(k);
            if candidate < best_tail {
                best = k;
                best_tail = candidate;
            }
        }
    }
    (best, omitted(best))
}
