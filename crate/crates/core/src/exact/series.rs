use rug::Rational;

use super::poly::{RatPoly, Var};

/// Formal power series in `t` known modulo `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
    order: usize,
}

impl TruncatedSeries {
    /// Coefficients beyond `order` are dropped; missing ones are zero.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order, Rational::new());
        TruncatedSeries { coeffs, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Quotient `self / den` modulo `t^order`. Returns `None` when `den` has
    /// zero constant term.
    pub fn div(&self, den: &TruncatedSeries) -> Option<TruncatedSeries> {
        let order = self.order.min(den.order);
        let lead = den.coeffs.first()?;
        if *lead == 0 {
            return None;
        }
        let mut out: Vec<Rational> = Vec::with_capacity(order);
        for k in 0..order {
            let mut v = self.coeffs[k].clone();
            for (i, q) in out.iter().enumerate() {
                v -= Rational::from(q * &den.coeffs[k - i]);
            }
            v /= lead;
            out.push(v);
        }
        Some(TruncatedSeries { coeffs: out, order })
    }

    pub fn mul(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let mut out = vec![Rational::new(); order];
        for (i, x) in self.coeffs.iter().take(order).enumerate() {
            for (j, y) in rhs.coeffs.iter().take(order - i).enumerate() {
                out[i + j] += Rational::from(x * y);
            }
        }
        TruncatedSeries { coeffs: out, order }
    }
}

/// Coefficients of `exp(s * g(t))` modulo `t^order`, each a polynomial in the
/// parameter `s` (labelled `var`).
///
/// `g` must have zero constant term. Uses `f' = s g' f`, i.e.
/// `n f_n = s * sum_{j=1..n} j g_j f_{n-j}`.
pub fn exp_parametric(g: &TruncatedSeries, var: Var) -> Vec<RatPoly> {
    assert!(
        g.order() == 0 || *g.coeff(0) == 0,
        "exp_parametric needs g(0) = 0"
    );
    let order = g.order();
    let mut f: Vec<RatPoly> = Vec::with_capacity(order);
    if order == 0 {
        return f;
    }
    f.push(RatPoly::one(var));
    for n in 1..order {
        let mut acc = RatPoly::zero(var);
        for j in 1..=n {
            let gj = g.coeff(j);
            if *gj == 0 {
                continue;
            }
            let w = Rational::from(gj * j as u64);
            acc.add_scaled(&f[n - j], &w);
        }
        let acc = acc.shift(1).scale(&Rational::from((1, n as u64)));
        f.push(acc);
    }
    f
}
