//! Reproduction suite for the published tables and worked examples.
//!
//! [`ReferenceData::published`] holds the printed values; [`run`] recomputes
//! each from scratch and compares. Mutating a `ReferenceData` before calling
//! [`run`] is how fault injection is exercised.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::eval::{
    dk_fixed_precision, dk_sequence, eval, gamma_dingle_with, gamma_lower_paris, gamma_upper_paris,
    transition_coefficient_fixed, transition_coefficients, EvalRequest, Side, Target, Truncation,
};
use crate::exact::{
    coeff_set_paris, e_coeffs, pq_table, stirling3, stirling_gamma, Convention, JSign, RatPoly,
    DINGLE_CONVENTION,
};
use crate::oracle::oracle_gamma_upper;
use crate::precision::PrecisionCtx;

/// Check names accepted by `--only`, in run order.
pub const CHECKS: &[&str] = &["s3", "paris", "e", "gamma", "d4", "dingle", "identity"];

pub const DEFAULT_SEED: u64 = 0x1ea7_5eed;

const IDENTITY_SAMPLES: usize = 20;

#[rustfmt::skip]
const TABLE1: &[(usize, &[u64])] = &[
    (3, &[1]),
    (4, &[1]),
    (5, &[1]),
    (6, &[1, 10]),
    (7, &[1, 35]),
    (8, &[1, 91]),
    (9, &[1, 210, 280]),
    (10, &[1, 456, 2100]),
    (11, &[1, 957, 10395]),
    (12, &[1, 1969, 42735, 15400]),
    (13, &[1, 4004, 158301, 200200]),
    (14, &[1, 8086, 549549, 1611610]),
    (15, &[1, 16263, 1827826, 10335325, 1401400]),
    (16, &[1, 32631, 5903898, 57962905, 28028000]),
    (17, &[1, 65382, 18682014, 297797500, 333533200]),
    (18, &[1, 130900, 58257810, 1439774336, 3073270200, 190590400]),
    (19, &[1, 261953, 179765973, 6662393738, 24234675465, 5431826400]),
    (20, &[1, 524077, 550478241, 29844199346, 172096749825, 89625135600]),
];

type Terms = &'static [(usize, &'static str)];

#[rustfmt::skip]
const TABLE2_A: &[Terms] = &[
    &[(0, "1")],
    &[(1, "1/2"), (3, "1/6")],
    &[(0, "1/12"), (2, "3/8"), (4, "1/6"), (6, "1/72")],
    &[(1, "1/8"), (3, "47/144"), (5, "37/240"), (7, "1/48"), (9, "1/1296")],
    &[(0, "1/288"), (2, "5/32"), (4, "347/1152"), (6, "617/4320"), (8, "23/960"), (10, "1/648"), (12, "1/31104")],
    &[(1, "5/576"), (3, "79/432"), (5, "367/1280"), (7, "32353/241920"), (9, "785/31104"), (11, "37/17280"), (13, "5/62208"), (15, "1/933120")],
];

#[rustfmt::skip]
const TABLE2_B: &[Terms] = &[
    &[],
    &[(0, "1/3"), (2, "1/6")],
    &[(1, "1/4"), (3, "11/72"), (5, "1/72")],
    &[(0, "4/135"), (2, "241/1080"), (4, "293/2160"), (6, "13/648"), (8, "1/1296")],
    &[(1, "241/4320"), (3, "341/1620"), (5, "6377/51840"), (7, "389/17280"), (9, "47/31104"), (11, "1/31104")],
    &[(0, "-8/2835"), (2, "14297/181440"), (4, "7403/36288"), (6, "9179/80640"), (8, "403/17280"), (10, "107/51840"), (12, "37/466560"), (14, "1/933120")],
];

const E_LIST: &[&str] = &[
    "1/3",
    "1/540",
    "-25/6048",
    "-101/155520",
    "3184811/3695155200",
    "2745493/8151736320",
    "-119937661/225740390400",
    "-8325705316049/24176795811840000",
];

const GAMMA_LIST: &[&str] = &["1", "-1/12", "1/288", "139/51840", "-571/2488320"];

fn rational(s: &str) -> Rational {
    Rational::from_str(s).expect("reference rationals are well formed")
}

fn poly(terms: &[(usize, &str)]) -> Vec<Rational> {
    let len = terms.iter().map(|&(p, _)| p + 1).max().unwrap_or(0);
    let mut c = vec![Rational::new(); len];
    for &(p, v) in terms {
        c[p] = rational(v);
    }
    c
}

/// Published values the suite compares against.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceData {
    /// Rows `(k, [S3(k,1), S3(k,2), ...])`.
    pub s3: Vec<(usize, Vec<u64>)>,
    /// Dense coefficient lists of `A_k(x)` and `B_k(x)`, `k = 0..=5`.
    pub paris_a: Vec<Vec<Rational>>,
    pub paris_b: Vec<Vec<Rational>>,
    pub e: Vec<Rational>,
    pub gamma: Vec<Rational>,
    /// `q_4(10)`, the subtrahend in the cancellation example.
    pub q4_10: Rational,
    /// `d_4(10)` as printed, and the unit of its last printed digit.
    pub d4_10: f64,
    pub d4_10_ulp: f64,
    /// Decimal digits the naive double-precision route must lose at `d_4(10)`
    /// (the subtraction `43.750008... - 43.75` itself costs 6.7).
    pub d4_min_loss_digits: f64,
    /// Same for the transition coefficient `C_4(10) = A_4 d_0 - B_4`.
    pub c4_min_loss_digits: f64,
    /// Point, order and tolerance for the `sqrt(a)` expansion sign check.
    pub dingle_point: (f64, f64),
    pub dingle_m: u32,
    pub dingle_tol: f64,
    /// Convention expected to pass the sign check.
    pub dingle_convention: Convention,
}

impl ReferenceData {
    pub fn published() -> Self {
        ReferenceData {
            s3: TABLE1.iter().map(|&(k, row)| (k, row.to_vec())).collect(),
            paris_a: TABLE2_A.iter().map(|t| poly(t)).collect(),
            paris_b: TABLE2_B.iter().map(|t| poly(t)).collect(),
            e: E_LIST.iter().map(|s| rational(s)).collect(),
            gamma: GAMMA_LIST.iter().map(|s| rational(s)).collect(),
            q4_10: Rational::from((175, 4)),
            d4_10: 8.682907e-6,
            d4_10_ulp: 1e-12,
            d4_min_loss_digits: 6.0,
            c4_min_loss_digits: 10.0,
            dingle_point: (100.0, 120.0),
            dingle_m: 4,
            dingle_tol: 1e-6,
            dingle_convention: DINGLE_CONVENTION,
        }
    }

    /// Perturbs one reference value used by `check`.
    pub fn corrupt(&mut self, check: &str) -> Result<()> {
        match check {
            "s3" => {
                let last = self.s3.last_mut().and_then(|(_, row)| row.last_mut());
                *last.expect("table is non-empty") += 1;
            }
            "paris" => {
                let a5 = self.paris_a.last_mut().expect("table is non-empty");
                *a5.last_mut().expect("A_5 is non-zero") += Rational::from((1, 933120));
            }
            "e" => *self.e.last_mut().expect("list is non-empty") *= 2,
            "gamma" => *self.gamma.last_mut().expect("list is non-empty") *= -1,
            "d4" => self.d4_10 *= 1.001,
            "dingle" => {
                self.dingle_convention = Convention {
                    j_sign: JSign::Alternating,
                    ..self.dingle_convention
                }
            }
            other => {
                return Err(Error::Invalid(format!(
                    "no reference data to corrupt for check {other:?}"
                )))
            }
        }
        Ok(())
    }
}

impl Default for ReferenceData {
    fn default() -> Self {
        Self::published()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Summary on success; the first divergent value on failure.
    pub detail: String,
}

/// Runs the named checks (all of [`CHECKS`] when `only` is empty).
pub fn run(reference: &ReferenceData, only: &[String], seed: u64) -> Result<Vec<CheckOutcome>> {
    for name in only {
        if !CHECKS.contains(&name.as_str()) {
            return Err(Error::Invalid(format!(
                "unknown check {name:?}; expected one of {}",
                CHECKS.join(", ")
            )));
        }
    }
    let mut out = Vec::new();
    for &name in CHECKS {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        let result = match name {
            "s3" => check_s3(reference),
            "paris" => check_paris(reference),
            "e" => check_list("E", &reference.e, &e_coeffs(reference.e.len() - 1)),
            "gamma" => check_gamma(reference),
            "d4" => check_d4(reference),
            "dingle" => check_dingle(reference),
            "identity" => check_identity(seed),
            _ => unreachable!(),
        };
        let (passed, detail) = match result {
            Ok(summary) => (true, summary),
            Err(msg) => (false, msg),
        };
        out.push(CheckOutcome {
            name,
            passed,
            detail,
        });
    }
    Ok(out)
}

type Check = std::result::Result<String, String>;

fn check_s3(r: &ReferenceData) -> Check {
    let mut n = 0;
    for (k, row) in &r.s3 {
        for (j0, &want) in row.iter().enumerate() {
            let got = stirling3(*k, j0 + 1);
            if got != want {
                return Err(format!("S3({k},{}): expected {want}, got {got}", j0 + 1));
            }
            n += 1;
        }
    }
    Ok(format!("{n} entries exact"))
}

fn compare_poly(label: &str, want: &[Rational], got: &RatPoly) -> Check {
    let len = want.len().max(got.coeffs().len());
    for i in 0..len {
        let w = want.get(i).cloned().unwrap_or_default();
        let g = got.coeff(i);
        if w != g {
            return Err(format!(
                "{label} coefficient of x^{i}: expected {w}, got {g}"
            ));
        }
    }
    Ok(String::new())
}

fn check_paris(r: &ReferenceData) -> Check {
    let k_max = r.paris_a.len().max(r.paris_b.len()) - 1;
    let set = coeff_set_paris(k_max);
    for (k, want) in r.paris_a.iter().enumerate() {
        compare_poly(&format!("A_{k}"), want, &set.a[k])?;
    }
    for (k, want) in r.paris_b.iter().enumerate() {
        compare_poly(&format!("B_{k}"), want, &set.b[k])?;
    }
    Ok(format!("A_k, B_k exact for k <= {k_max}"))
}

fn check_list(label: &str, want: &[Rational], got: &[Rational]) -> Check {
    for (k, (w, g)) in want.iter().zip(got).enumerate() {
        if w != g {
            return Err(format!("{label}_{k}: expected {w}, got {g}"));
        }
    }
    Ok(format!("{label}_0..{label}_{} exact", want.len() - 1))
}

fn check_gamma(r: &ReferenceData) -> Check {
    let got: Vec<Rational> = (0..r.gamma.len()).map(stirling_gamma).collect();
    check_list("gamma", &r.gamma, &got).map(|s| format!("{s} as (-1)^k A_2k(0)"))
}

fn check_d4(r: &ReferenceData) -> Check {
    let pq = pq_table(4);
    let x = Rational::from(10);
    let q4 = pq.q[4].eval(&x);
    if q4 != r.q4_10 {
        return Err(format!("q_4(10): expected {}, got {q4}", r.q4_10));
    }
    let escalated = dk_sequence(10.0, 4, &PrecisionCtx::double()).map_err(|e| e.to_string())?;
    let got = escalated[4].to_f64();
    if (got - r.d4_10).abs() > r.d4_10_ulp / 2.0 {
        return Err(format!(
            "d_4(10): expected {:e} to the printed digits, got {}",
            r.d4_10,
            escalated[4].to_string_radix(10, None)
        ));
    }
    let naive = dk_fixed_precision(10.0, 4, 53).map_err(|e| e.to_string())?;
    let lost = digits_lost(&naive, &escalated[4]);
    if lost < r.d4_min_loss_digits {
        return Err(format!(
            "naive 53-bit d_4(10) = {} lost only {lost:.1} digits",
            naive.to_string_radix(10, None)
        ));
    }
    let set = coeff_set_paris(4);
    let (c, _) = transition_coefficients(&set, 10.0, 4, &PrecisionCtx::double())
        .map_err(|e| e.to_string())?;
    let naive_c = transition_coefficient_fixed(&set, 10.0, 4, 53).map_err(|e| e.to_string())?;
    let lost_c = digits_lost(&naive_c, &c[4]);
    if lost_c < r.c4_min_loss_digits {
        return Err(format!(
            "naive 53-bit C_4(10) = {} lost only {lost_c:.1} digits",
            naive_c.to_string_radix(10, None)
        ));
    }
    Ok(format!(
        "d_4(10) = {got:.7e}; naive 53-bit routes lose {lost:.1} digits (d_4) and {lost_c:.1} (C_4)"
    ))
}

/// Decimal digits by which `approx` falls short of 16 correct digits of `exact`.
pub(crate) fn digits_lost(approx: &Float, exact: &Float) -> f64 {
    let rel = Float::with_val(128, approx - exact) / exact;
    let rel = rel.to_f64().abs();
    let correct = if rel == 0.0 {
        16.0
    } else {
        (-rel.log10()).clamp(0.0, 16.0)
    };
    16.0 - correct
}

fn check_dingle(r: &ReferenceData) -> Check {
    let (a, z) = r.dingle_point;
    let oracle = oracle_gamma_upper(a + 1.0, z, 192).map_err(|e| e.to_string())?;
    let ctx = PrecisionCtx::new(128, 1024).expect("valid precision");
    let rel = |conv: Convention| -> std::result::Result<f64, String> {
        let v = gamma_dingle_with(a, z, r.dingle_m, Side::Upper, conv, &ctx)
            .map_err(|e| e.to_string())?;
        Ok(
            (Float::with_val(192, &v.value - &oracle.value) / &oracle.value)
                .to_f64()
                .abs(),
        )
    };
    let flipped = Convention {
        j_sign: match r.dingle_convention.j_sign {
            JSign::Alternating => JSign::Direct,
            JSign::Direct => JSign::Alternating,
        },
        ..r.dingle_convention
    };
    let pinned = rel(r.dingle_convention)?;
    let other = rel(flipped)?;
    if pinned >= r.dingle_tol {
        return Err(format!(
            "Gamma({}, {z}) with {:?} weights: relative error {pinned:e} >= {:e}",
            a + 1.0,
            r.dingle_convention.j_sign,
            r.dingle_tol
        ));
    }
    if other < 100.0 * r.dingle_tol {
        return Err(format!(
            "rejected {:?} weights also reach {other:e}; sign not resolved",
            flipped.j_sign
        ));
    }
    Ok(format!(
        "{:?} weights: {pinned:.2e}; {:?} weights: {other:.2e}",
        r.dingle_convention.j_sign, flipped.j_sign
    ))
}

fn check_identity(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = PrecisionCtx::double();
    for _ in 0..IDENTITY_SAMPLES {
        let a: f64 = rng.random_range(5.0..=1e4);
        let z: f64 = rng.random_range(5.0..=1e4);
        let p =
            eval(&EvalRequest::new(a, z, Target::P).precision(ctx)).map_err(|e| e.to_string())?;
        let q =
            eval(&EvalRequest::new(a, z, Target::Q).precision(ctx)).map_err(|e| e.to_string())?;
        let sum = Float::with_val(ctx.bits(), &p.value + &q.value);
        if sum != 1 {
            return Err(format!(
                "P + Q at a = {a}, z = {z}: {}",
                sum.to_string_radix(10, None)
            ));
        }
        let (gap, tol) = independent_pair(a, &ctx).map_err(|e| e.to_string())?;
        if gap > tol {
            return Err(format!(
                "independent P + Q - 1 at a = z = {a}: {gap:e} exceeds {tol:e}"
            ));
        }
    }
    Ok(format!("{IDENTITY_SAMPLES} seeded samples (seed {seed})"))
}

/// `|P + Q - 1|` with both halves from their own expansion at `z = a`, and the
/// tolerance implied by their error estimates.
pub fn independent_pair(a: f64, ctx: &PrecisionCtx) -> Result<(f64, f64)> {
    let up = gamma_upper_paris(a, a, Truncation::Adaptive, ctx)?;
    let lo = gamma_lower_paris(a, a, Truncation::Adaptive, ctx)?;
    let w = ctx.bits() + 64;
    let ga = Float::with_val(w, a).gamma();
    let q = Float::with_val(w, &up.value / &ga);
    let p = Float::with_val(w, &lo.value / &ga);
    let gap = Float::with_val(w, &p + &q) - 1u32;
    let tol = p.to_f64() * lo.err_estimate + q.to_f64() * up.err_estimate;
    Ok((gap.to_f64().abs(), tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_check_is_rejected() {
        let r = ReferenceData::published();
        assert!(run(&r, &["nope".to_string()], DEFAULT_SEED).is_err());
    }

    #[test]
    fn exact_checks_pass_and_corruption_fails() {
        let only: Vec<String> = ["s3", "paris", "e", "gamma"].map(String::from).to_vec();
        let r = ReferenceData::published();
        assert!(run(&r, &only, DEFAULT_SEED)
            .unwrap()
            .iter()
            .all(|c| c.passed));
        for name in &only {
            let mut bad = ReferenceData::published();
            bad.corrupt(name).unwrap();
            let out = run(&bad, std::slice::from_ref(name), DEFAULT_SEED).unwrap();
            assert!(!out[0].passed, "{name} should fail");
        }
    }

    #[test]
    fn identity_is_not_corruptible() {
        assert!(ReferenceData::published().corrupt("identity").is_err());
    }
}
