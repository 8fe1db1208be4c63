use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

const MAX_LEVEL: u32 = 14;

/// Tanh-sinh (double exponential) quadrature of `f` over `[lo, hi]`.
///
/// Halves the step until two successive levels agree to `prec - 8` bits.
/// Nodes never touch the endpoints, so integrable endpoint behaviour is fine.
pub fn tanh_sinh<F>(f: &F, lo: &Float, hi: &Float, prec: u32) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    let w = prec + 16;
    let half_width = Float::with_val(w, hi - lo) / 2u32;
    let mid = Float::with_val(w, hi + lo) / 2u32;
    if half_width.is_zero() {
        return Ok(Float::new(prec));
    }
    let half_pi = Float::with_val(w, Constant::Pi) / 2u32;
    let tol_exp = -(prec as i32) + 8;

    // Truncate t where the weight drops below 2^-(w+16).
    let t_max = {
        let target = (w as f64 + 16.0) * std::f64::consts::LN_2;
        // weight ~ pi e^{t} exp(-pi/2 e^{t}); solve pi/2 e^t ~ target
        (2.0 * target / std::f64::consts::PI).ln() + 1.0
    };

    // Sum at node t: weight(t) * [f(mid + hw x) + f(mid - hw x)] with x = tanh(pi/2 sinh t)
    let node_pair = |t: &Float| -> Float {
        let sh = Float::with_val(w, t.sinh_ref());
        let ch = Float::with_val(w, t.cosh_ref());
        let u = Float::with_val(w, &half_pi * &sh);
        let cu = Float::with_val(w, u.cosh_ref());
        // 1 - x = e^{-u} / cosh u, kept exact to avoid cancellation near the ends
        let one_minus_x = Float::with_val(w, (-Float::with_val(w, &u)).exp()) / &cu;
        let weight = Float::with_val(w, &half_pi * &ch) / Float::with_val(w, cu.square_ref());
        let dist = Float::with_val(w, &half_width * &one_minus_x);
        let right = Float::with_val(w, hi - &dist);
        let left = Float::with_val(w, lo + &dist);
        let mut s = Float::with_val(w, f(&right));
        s += f(&left);
        s * weight
    };

    let mut h = Float::with_val(w, 1u32);
    let zero = Float::new(w);
    let mut sum = {
        let f0 = f(&mid);
        Float::with_val(w, &half_pi * f0)
    };
    let mut k = 1u32;
    loop {
        let t = Float::with_val(w, &h * k);
        if t.to_f64() > t_max {
            break;
        }
        sum += node_pair(&t);
        k += 1;
    }
    let mut estimate = Float::with_val(w, &sum * &h) * &half_width;

    for _level in 1..=MAX_LEVEL {
        h /= 2u32;
        // add the new odd nodes
        let mut k = 1u32;
        loop {
            let t = Float::with_val(w, &h * k);
            if t.to_f64() > t_max {
                break;
            }
            sum += node_pair(&t);
            k += 2;
        }
        let next = Float::with_val(w, &sum * &h) * &half_width;
        let diff = Float::with_val(w, &next - &estimate);
        estimate = next;
        let converged = diff.is_zero()
            || match (diff.get_exp(), estimate.get_exp()) {
                (Some(ed), Some(ee)) => ed - ee < tol_exp,
                (Some(_), None) => false,
                _ => true,
            };
        if converged && estimate != zero {
            return Ok(Float::with_val(prec, &estimate));
        }
        if estimate.is_zero() && diff.is_zero() {
            return Ok(Float::new(prec));
        }
    }
    Err(Error::NonConvergence {
        what: "tanh-sinh quadrature",
        iterations: MAX_LEVEL as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_exponential() {
        let p = 200;
        let f = |t: &Float| Float::with_val(p + 16, t.exp_ref());
        let lo = Float::with_val(p, 0u32);
        let hi = Float::with_val(p, 1u32);
        let got = tanh_sinh(&f, &lo, &hi, p).unwrap();
        let exact = Float::with_val(p, 1u32).exp() - 1u32;
        let err = Float::with_val(p, &got - &exact).abs().to_f64();
        assert!(err < 1e-55, "err = {err}");
    }

    #[test]
    fn handles_endpoint_singularity() {
        // int_0^1 t^{-1/2} dt = 2
        let p = 128;
        let f = |t: &Float| Float::with_val(p + 16, t.sqrt_ref()).recip();
        let lo = Float::with_val(p, 0u32);
        let hi = Float::with_val(p, 1u32);
        let got = tanh_sinh(&f, &lo, &hi, p).unwrap();
        assert!((got.to_f64() - 2.0).abs() < 1e-30);
    }
}
