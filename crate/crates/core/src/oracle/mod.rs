//! High-precision reference values for `gamma(a, z)`, `Gamma(a, z)` and
//! `d_k(x)`, computed by classical methods that share nothing with the
//! evaluator: a Kummer series, a modified-Lentz continued fraction, and
//! tanh-sinh quadrature.
//!
//! Every value is computed twice, at `bits` and `2 * bits` (each plus a
//! guard), and `verified_bits` records how far the two runs agree.

mod quad;

use rug::{Assign, Float};

use crate::error::{Error, Result};

pub use quad::tanh_sinh;

const GUARD: u32 = 64;
const SERIES_MAX_TERMS: usize = 5_000_000;
const CF_MAX_TERMS: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleValue {
    /// Rounded to `bits`.
    pub value: Float,
    pub bits: u32,
    /// Agreement, in bits, between the `bits` and `2 * bits` runs.
    pub verified_bits: u32,
}

impl OracleValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn check(a: f64, z: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0 && z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!(
            "oracle needs finite a > 0 and z > 0, got a = {a}, z = {z}"
        )));
    }
    Ok(())
}

fn verified(bits: u32, compute: impl Fn(u32) -> Result<Float>) -> Result<OracleValue> {
    let lo = compute(bits + GUARD)?;
    let hi = compute(2 * bits + GUARD)?;
    let verified_bits = agreement_bits(&lo, &hi).min(bits);
    Ok(OracleValue {
        value: Float::with_val(bits, &hi),
        bits,
        verified_bits,
    })
}

/// Number of leading bits on which `x` and `y` agree, relative to `y`.
pub fn agreement_bits(x: &Float, y: &Float) -> u32 {
    let p = x.prec().max(y.prec());
    let diff = Float::with_val(p, x - y);
    if diff.is_zero() {
        return p;
    }
    match (y.get_exp(), diff.get_exp()) {
        (Some(ey), Some(ed)) if ey > ed => (ey - ed - 1) as u32,
        _ => 0,
    }
}

/// `gamma(a, z) = z^a e^{-z} sum_{n>=0} z^n / (a (a+1) ... (a+n))`.
///
/// All terms are positive, so the sum is accurate for any `z`; it needs
/// about `z` terms once `z` exceeds `a`.
pub fn lower_series(a: f64, z: f64, prec: u32) -> Result<Float> {
    check(a, z)?;
    let af = Float::with_val(prec, a);
    let zf = Float::with_val(prec, z);
    let mut term = Float::with_val(prec, af.recip_ref());
    let mut sum = term.clone();
    let mut denom = af.clone();
    for _ in 0..SERIES_MAX_TERMS {
        denom += 1u32;
        term *= &zf;
        term /= &denom;
        sum += &term;
        let tail_small = term.get_exp().unwrap_or(i32::MIN)
            < sum.get_exp().unwrap_or(i32::MIN) - prec as i32 - 4;
        if tail_small && denom > zf {
            return Ok(sum * prefactor(&af, &zf));
        }
    }
    Err(Error::NonConvergence {
        what: "lower incomplete gamma series",
        iterations: SERIES_MAX_TERMS,
    })
}

/// `z^a e^{-z}` through its logarithm.
fn prefactor(a: &Float, z: &Float) -> Float {
    let p = a.prec();
    let log = Float::with_val(p, z.ln_ref()) * a - z;
    log.exp()
}

/// `Gamma(a, z) = z^a e^{-z} / (z + 1 - a - 1(1 - a)/(z + 3 - a - 2(2 - a)/(z + 5 - a - ...)))`
/// by the modified Lentz method.
pub fn upper_continued_fraction(a: f64, z: f64, prec: u32) -> Result<Float> {
    check(a, z)?;
    let af = Float::with_val(prec, a);
    let zf = Float::with_val(prec, z);
    let tiny = Float::with_val(prec, Float::i_exp(1, -(8 * prec as i32)));
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 2));

    let mut b = Float::with_val(prec, &zf + 1u32) - &af;
    let mut c = Float::with_val(prec, tiny.recip_ref());
    let mut d = Float::with_val(prec, b.recip_ref());
    let mut h = d.clone();
    let mut an = Float::new(prec);
    let mut delta = Float::new(prec);
    for i in 1..CF_MAX_TERMS {
        // a_i = -i (i - a)
        an.assign(i as u32);
        an -= &af;
        an *= i as u32;
        an = -an;
        b += 2u32;
        d = Float::with_val(prec, &an * &d) + &b;
        if d.is_zero() {
            d.assign(&tiny);
        }
        c = Float::with_val(prec, &an / &c) + &b;
        if c.is_zero() {
            c.assign(&tiny);
        }
        d.recip_mut();
        delta.assign(&c * &d);
        h *= &delta;
        if Float::with_val(prec, &delta - 1u32).abs() < eps {
            return Ok(h * prefactor(&af, &zf));
        }
    }
    Err(Error::NonConvergence {
        what: "upper incomplete gamma continued fraction",
        iterations: CF_MAX_TERMS,
    })
}

fn gamma_fn(a: f64, prec: u32) -> Float {
    Float::with_val(prec, a).gamma()
}

fn lower_at(a: f64, z: f64, prec: u32) -> Result<Float> {
    if z <= a + 1.0 {
        lower_series(a, z, prec)
    } else {
        Ok(gamma_fn(a, prec) - upper_continued_fraction(a, z, prec)?)
    }
}

fn upper_at(a: f64, z: f64, prec: u32) -> Result<Float> {
    if z > a + 1.0 {
        upper_continued_fraction(a, z, prec)
    } else {
        Ok(gamma_fn(a, prec) - lower_series(a, z, prec)?)
    }
}

/// `gamma(a, z)`: series for `z <= a + 1`, else `Gamma(a) - Gamma(a, z)`.
pub fn oracle_gamma_lower(a: f64, z: f64, bits: u32) -> Result<OracleValue> {
    check(a, z)?;
    verified(bits, |p| lower_at(a, z, p))
}

/// `Gamma(a, z)`: continued fraction for `z > a + 1`, else `Gamma(a) - gamma(a, z)`.
pub fn oracle_gamma_upper(a: f64, z: f64, bits: u32) -> Result<OracleValue> {
    check(a, z)?;
    verified(bits, |p| upper_at(a, z, p))
}

/// `P(a, z)`.
pub fn oracle_p(a: f64, z: f64, bits: u32) -> Result<OracleValue> {
    check(a, z)?;
    verified(bits, |p| Ok(lower_at(a, z, p)? / gamma_fn(a, p)))
}

/// `Q(a, z)`.
pub fn oracle_q(a: f64, z: f64, bits: u32) -> Result<OracleValue> {
    check(a, z)?;
    verified(bits, |p| Ok(upper_at(a, z, p)? / gamma_fn(a, p)))
}

/// `d_k(x) = (1/k!) int_0^inf t^k e^{-x t - t^2/2} dt` by tanh-sinh
/// quadrature over a finite range whose tail lies below `2^-(bits + guard)`.
pub fn oracle_dk(x: f64, k: u32, bits: u32) -> Result<OracleValue> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("oracle_dk needs finite x, got {x}")));
    }
    verified(bits, |p| dk_quadrature(x, k, p))
}

fn dk_quadrature(x: f64, k: u32, prec: u32) -> Result<Float> {
    // log integrand: k ln t - x t - t^2/2, peaked at t* = (-x + sqrt(x^2 + 4k))/2.
    let kf = k as f64;
    let log_f = |t: f64| {
        let lt = if k == 0 { 0.0 } else { kf * t.ln() };
        lt - x * t - t * t / 2.0
    };
    let peak = if k == 0 {
        (-x).max(0.0)
    } else {
        (-x + (x * x + 4.0 * kf).sqrt()) / 2.0
    };
    let cutoff = log_f(peak.max(1e-300)) - (prec as f64 + 16.0) * std::f64::consts::LN_2;
    let mut upper = peak + 1.0;
    while log_f(upper) > cutoff {
        upper += 1.0 + upper * 0.25;
    }

    // Pieces shrink geometrically towards 0 when the integrand is concentrated there.
    let width = if x > 1.0 { 1.0 / x } else { 1.0 };
    let mut breaks = vec![0.0];
    let mut edge = width;
    while edge < 1.0 && edge < upper {
        breaks.push(edge);
        edge *= 2.0;
    }
    let mut edge = breaks.last().copied().unwrap_or(0.0).max(width.min(1.0));
    if edge > 0.0 && *breaks.last().unwrap() < edge {
        breaks.push(edge);
    }
    while edge < upper {
        edge = (edge + 1.0).min(upper);
        breaks.push(edge);
    }

    let xf = Float::with_val(prec, x);
    let integrand = |t: &Float| -> Float {
        let mut e = Float::with_val(prec, t * &xf);
        e += Float::with_val(prec, t.square_ref()) / 2u32;
        let base = (-e).exp();
        if k == 0 {
            base
        } else {
            Float::with_val(prec, rug::ops::Pow::pow(t, k)) * base
        }
    };
    let mut total = Float::new(prec);
    for pair in breaks.windows(2) {
        let lo = Float::with_val(prec, pair[0]);
        let hi = Float::with_val(prec, pair[1]);
        total += tanh_sinh(&integrand, &lo, &hi, prec)?;
    }
    let fact = Float::with_val(prec, Float::factorial(k));
    Ok(total / fact)
}
