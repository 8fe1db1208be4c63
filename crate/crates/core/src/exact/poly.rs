use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

/// Name of the indeterminate a [`RatPoly`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    /// Transition variable (z - a)/sqrt(z).
    Chi,
    /// Transition variable (z - a)/sqrt(a).
    Xi,
    Z,
    A,
}

impl Var {
    pub fn as_str(self) -> &'static str {
        match self {
            Var::Chi => "chi",
            Var::Xi => "xi",
            Var::Z => "z",
            Var::A => "a",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[i]` multiplies `var^i`. Trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients and degree -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
    var: Var,
}

impl RatPoly {
    pub fn zero(var: Var) -> Self {
        RatPoly {
            coeffs: Vec::new(),
            var,
        }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(Rational::from(1), var)
    }

    pub fn constant(c: Rational, var: Var) -> Self {
        Self::from_coeffs(vec![c], var)
    }

    /// `c * var^power`.
    pub fn monomial(c: Rational, power: usize, var: Var) -> Self {
        let mut coeffs = vec![Rational::new(); power + 1];
        coeffs[power] = c;
        Self::from_coeffs(coeffs, var)
    }

    pub fn from_coeffs(coeffs: Vec<Rational>, var: Var) -> Self {
        let mut p = RatPoly { coeffs, var };
        p.trim();
        p
    }

    /// Builds a polynomial from `(numerator, denominator)` pairs, ascending in power.
    pub fn from_ratios(pairs: &[(i64, i64)], var: Var) -> Self {
        let coeffs = pairs.iter().map(|&(n, d)| Rational::from((n, d))).collect();
        Self::from_coeffs(coeffs, var)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// Same coefficients, relabelled indeterminate.
    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `var^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation at the precision of `x`.
    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += &Float::with_val(prec, c);
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| Rational::from(x * c)).collect();
        Self::from_coeffs(coeffs, self.var)
    }

    /// Multiplies by `var^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::new(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly {
            coeffs,
            var: self.var,
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &RatPoly, c: &Rational) {
        debug_assert_eq!(self.var, other.var);
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::new());
        }
        for (dst, src) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *dst += Rational::from(src * c);
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from(1));
        out
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from(-1));
        out
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        self.scale(&Rational::from(-1))
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        debug_assert_eq!(self.var, rhs.var);
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero(self.var);
        }
        let mut coeffs = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += Rational::from(x * y);
            }
        }
        RatPoly::from_coeffs(coeffs, self.var)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let negative = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag == 1 => {}
                _ => write!(f, "{mag} ")?,
            }
            match i {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, i)?,
            }
        }
        Ok(())
    }
}
