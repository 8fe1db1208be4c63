//! The functions `d_k(x) = e^{x^2/4} D_{-k-1}(x)` and the transition
//! coefficients `C_k(x) = A_k(x) d_0(x) -/+ B_k(x)`.
//!
//! For large positive `x` both `p_k(x) d_0(x) - q_k(x)` and
//! `A_k(x) d_0(x) - B_k(x)` lose most of their leading bits to cancellation
//! (at `x = 10`, `A_4 d_0` and `B_4` are both near `5e6` while their
//! difference is near `1e-8`). Every routine here measures the loss at its
//! working precision and reruns at a wider one until the target survives.

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::exact::{pq_table, CoeffSet};
use crate::precision::{escalate, lost_bits, PrecisionCtx, GUARD_BITS};

/// Default switch between forward recurrence and the escalated `p d0 - q` form.
pub const DEFAULT_CHI_STAR: f64 = 4.0;

/// Above this argument `erfcx` uses its continued fraction.
const ERFCX_CF_THRESHOLD: f64 = 32.0;
const ERFCX_MAX_TERMS: usize = 100_000;

/// Scaled complementary error function `e^{t^2} erfc(t)` for `t >= 0` at
/// precision `prec`.
pub fn erfcx(t: &Float, prec: u32) -> Result<Float> {
    if t.is_sign_negative() && !t.is_zero() {
        return Err(Error::Domain(format!("erfcx needs t >= 0, got {t}")));
    }
    let w = prec + GUARD_BITS;
    let t = Float::with_val(w, t);
    if t < ERFCX_CF_THRESHOLD {
        let sq = Float::with_val(w, t.square_ref());
        let e = sq.exp();
        let c = t.erfc();
        return Ok(Float::with_val(prec, e * c));
    }
    // erfcx(t) = 1/sqrt(pi) * 1/(t + (1/2)/(t + 1/(t + (3/2)/(t + ...))))
    let tiny = Float::with_val(w, Float::i_exp(1, -(4 * w as i32)));
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32 - 4)));
    let mut f = t.clone();
    let mut c = f.clone();
    let mut d = Float::new(w);
    for n in 1..ERFCX_MAX_TERMS {
        let an = Float::with_val(w, n as f64 / 2.0);
        d = Float::with_val(w, &an * &d) + &t;
        if d.is_zero() {
            d = tiny.clone();
        }
        c = Float::with_val(w, &an / &c) + &t;
        if c.is_zero() {
            c = tiny.clone();
        }
        d.recip_mut();
        let delta = Float::with_val(w, &c * &d);
        f *= &delta;
        if Float::with_val(w, delta - 1u32).abs() < eps {
            let sqrt_pi = Float::with_val(w, Constant::Pi).sqrt();
            return Ok(Float::with_val(prec, (f * sqrt_pi).recip()));
        }
    }
    Err(Error::NonConvergence {
        what: "erfcx continued fraction",
        iterations: ERFCX_MAX_TERMS,
    })
}

/// `d_0(x) = sqrt(pi/2) e^{x^2/2} erfc(x/sqrt 2)` at the precision of `x`.
pub(crate) fn d0_at(x: &Float) -> Result<Float> {
    let prec = x.prec();
    let w = prec + GUARD_BITS;
    let half_pi = Float::with_val(w, Constant::Pi) / 2u32;
    if !x.is_sign_negative() || x.is_zero() {
        let t = Float::with_val(w, x / Float::with_val(w, 2u32).sqrt());
        let s = erfcx(&t, w)?;
        return Ok(Float::with_val(prec, half_pi.sqrt() * s));
    }
    // d0(x) = sqrt(2 pi) e^{x^2/2} - d0(-x); the first term dominates.
    let neg = Float::with_val(w, -x);
    let reflected = d0_at(&neg)?;
    let big = Float::with_val(w, x.square_ref()) / 2u32;
    let big = big.exp() * Float::with_val(w, half_pi * 4u32).sqrt();
    if big.is_infinite() {
        return Err(Error::Domain(format!("d0({x}) overflows")));
    }
    Ok(Float::with_val(prec, big - reflected))
}

/// `d_0(x)` rounded to the target precision.
pub fn d0(x: f64, ctx: &PrecisionCtx) -> Result<Float> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "d0 needs a finite argument, got {x}"
        )));
    }
    let (v, _) = escalate(ctx, |w| Ok((d0_at(&Float::with_val(w, x))?, 0)))?;
    Ok(Float::with_val(ctx.bits(), v))
}

/// `d_0(x) ..= d_{k_max}(x)` rounded to the target precision.
///
/// Uses the forward recurrence `d_{k+1} = (d_{k-1} - x d_k)/(k+1)` from
/// `d_{-1} = 1` when `x <= chi_star`, otherwise `p_k(x) d_0(x) - q_k(x)`.
pub fn dk_sequence_with(
    x: f64,
    k_max: usize,
    ctx: &PrecisionCtx,
    chi_star: f64,
) -> Result<Vec<Float>> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "d_k needs a finite argument, got {x}"
        )));
    }
    let (vals, _) = escalate(ctx, |w| {
        if x <= chi_star {
            forward_recurrence(x, k_max, w)
        } else {
            pq_form(x, k_max, w)
        }
    })?;
    Ok(vals
        .into_iter()
        .map(|v| Float::with_val(ctx.bits(), v))
        .collect())
}

/// [`dk_sequence_with`] at the default `chi_star`.
pub fn dk_sequence(x: f64, k_max: usize, ctx: &PrecisionCtx) -> Result<Vec<Float>> {
    dk_sequence_with(x, k_max, ctx, DEFAULT_CHI_STAR)
}

/// `p_k(x) d_0(x) - q_k(x)` evaluated at exactly `bits` with no escalation.
///
/// This is the unguarded route; it exists to measure how much the escalated
/// path saves.
pub fn dk_fixed_precision(x: f64, k: usize, bits: u32) -> Result<Float> {
    let pq = pq_table(k);
    let xf = Float::with_val(bits, x);
    let d0x = d0_at(&xf)?;
    let pd = pq.p[k].eval_float(&xf) * &d0x;
    Ok(pd - pq.q[k].eval_float(&xf))
}

fn forward_recurrence(x: f64, k_max: usize, w: u32) -> Result<(Vec<Float>, u32)> {
    let xf = Float::with_val(w, x);
    let d0x = d0_at(&xf)?;
    let mut out = Vec::with_capacity(k_max + 1);
    let mut prev = Float::with_val(w, 1u32);
    let mut cur = d0x.clone();
    // p_k grows as the dominant solution; its size against d_k bounds the loss.
    let mut p_prev = Float::with_val(64, 0u32);
    let mut p_cur = Float::with_val(64, 1u32);
    let d0_low = Float::with_val(64, &d0x);
    let mut lost = 0u32;
    out.push(cur.clone());
    for k in 0..k_max {
        let next = (Float::with_val(w, &prev - Float::with_val(w, &xf * &cur))) / (k as u32 + 1);
        let p_next =
            (Float::with_val(64, &p_prev - Float::with_val(64, x * &p_cur))) / (k as u32 + 1);
        let scale = Float::with_val(64, &p_next * &d0_low).abs();
        lost = lost.max(lost_bits(&scale, &next, w));
        prev = cur;
        cur = next;
        p_prev = p_cur;
        p_cur = p_next;
        out.push(cur.clone());
    }
    Ok((out, lost))
}

fn pq_form(x: f64, k_max: usize, w: u32) -> Result<(Vec<Float>, u32)> {
    let pq = pq_table(k_max);
    let xf = Float::with_val(w, x);
    let d0x = d0_at(&xf)?;
    let mut lost = 0u32;
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let pd = Float::with_val(w, pq.p[k].eval_float(&xf) * &d0x);
        let q = pq.q[k].eval_float(&xf);
        let scale = Float::with_val(w, pd.abs_ref()).max(&Float::with_val(w, q.abs_ref()));
        let v = pd - q;
        lost = lost.max(lost_bits(&scale, &v, w));
        out.push(v);
    }
    Ok((out, lost))
}

/// `C_k(x)` for `0 <= k <= n` at working precision `w`, each with the bits
/// lost assembling it. `x` must be at precision `w`.
pub(crate) fn transition_at(
    set: &CoeffSet,
    x: &Float,
    d0x: &Float,
    n: usize,
) -> (Vec<Float>, Vec<u32>) {
    let w = x.prec();
    let sign = set.assembly_sign();
    let mut lost = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let ad = Float::with_val(w, set.a[k].eval_float(x) * d0x);
        let b = set.b[k].eval_float(x);
        let scale = Float::with_val(w, ad.abs_ref()).max(&Float::with_val(w, b.abs_ref()));
        let c = if sign > 0 { ad + b } else { ad - b };
        lost.push(lost_bits(&scale, &c, w));
        out.push(c);
    }
    (out, lost)
}

/// `C_k(x)` for `0 <= k <= n`, with cancellation-driven escalation.
/// Returns the values at the target precision and the working precision used.
pub fn transition_coefficients(
    set: &CoeffSet,
    x: f64,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<(Vec<Float>, u32)> {
    check_set(set, n)?;
    let (vals, w) = escalate(ctx, |w| {
        let xf = Float::with_val(w, x);
        let d0x = d0_at(&xf)?;
        let (vals, lost) = transition_at(set, &xf, &d0x, n);
        Ok((vals, lost.into_iter().max().unwrap_or(0)))
    })?;
    Ok((
        vals.into_iter()
            .map(|v| Float::with_val(ctx.bits(), v))
            .collect(),
        w,
    ))
}

/// `C_k(x)` at exactly `bits`, no escalation.
pub fn transition_coefficient_fixed(set: &CoeffSet, x: f64, k: usize, bits: u32) -> Result<Float> {
    check_set(set, k)?;
    let xf = Float::with_val(bits, x);
    let d0x = d0_at(&xf)?;
    let (mut v, _) = transition_at(set, &xf, &d0x, k);
    Ok(v.swap_remove(k))
}

fn check_set(set: &CoeffSet, n: usize) -> Result<()> {
    if n > set.max_k {
        return Err(Error::Invalid(format!(
            "coefficient set only reaches k = {}, asked for {n}",
            set.max_k
        )));
    }
    Ok(())
}
