use proptest::prelude::*;
use rug::{Integer, Rational};
use uniform_igamma::exact::{
    c_poly, check_kmax, coeff_set_dingle, coeff_set_from_json, coeff_set_paris, coeff_set_to_json,
    dingle_chat, e_coeffs, pq_polys, stirling3, stirling3_from_c_poly, stirling_gamma, RatPoly,
    Var, KMAX_CAP,
};

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn poly(pairs: &[(i64, i64)], var: Var) -> RatPoly {
    RatPoly::from_ratios(pairs, var)
}

#[test]
fn stirling_table_entries() {
    assert_eq!(stirling3(6, 2), 10);
    assert_eq!(stirling3(20, 6), Integer::from(89_625_135_600u64));
    assert_eq!(stirling3(5, 0), 0);
    assert_eq!(stirling3(0, 0), 1);
    let row20: [u64; 6] = [1, 524077, 550478241, 29844199346, 172096749825, 89625135600];
    for (j, want) in row20.iter().enumerate() {
        assert_eq!(stirling3(20, j + 1), *want);
    }
    assert_eq!(stirling3(20, 7), 0);
}

/// Partitions of `n` labelled points into `j` blocks of size at least 3,
/// counted by the block holding the last point:
/// `T(n+1, j) = sum_{i>=2} C(n, i) T(n-i, j-1)`.
fn partitions_by_last_block(n_max: usize) -> Vec<Vec<Integer>> {
    let mut t = vec![vec![Integer::ZERO; n_max / 3 + 2]; n_max + 1];
    t[0][0] = Integer::from(1);
    for n in 0..n_max {
        for j in 1..t[n + 1].len() {
            let mut acc = Integer::ZERO;
            for i in 2..=n {
                acc += Integer::from(n as u32).binomial(i as u32) * &t[n - i][j - 1];
            }
            t[n + 1][j] = acc;
        }
    }
    t
}

#[test]
fn stirling_matches_partition_count() {
    let t = partitions_by_last_block(30);
    for (k, row) in t.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            assert_eq!(&stirling3(k, j), want, "S3({k}, {j})");
        }
    }
}

#[test]
fn stirling_routes_agree() {
    for k in 0..=24 {
        for j in 0..=k / 3 + 1 {
            assert_eq!(stirling3(k, j), stirling3_from_c_poly(k, j), "({k}, {j})");
        }
    }
}

#[test]
fn c_polynomials() {
    assert_eq!(c_poly(0), RatPoly::one(Var::Z));
    assert!(c_poly(1).is_zero());
    assert!(c_poly(2).is_zero());
    assert_eq!(c_poly(3), poly(&[(0, 1), (-1, 1)], Var::Z));
    assert_eq!(c_poly(6), poly(&[(0, 1), (-1, 1), (10, 1)], Var::Z));
}

#[test]
fn degrees() {
    for k in 3..=24 {
        assert_eq!(c_poly(k).degree(), (k / 3) as isize, "c_{k}");
    }
    let (p, q) = pq_polys(20);
    for k in 1..=20 {
        assert_eq!(p[k].degree(), k as isize, "p_{k}");
        assert_eq!(q[k].degree(), k as isize - 1, "q_{k}");
    }
}

#[test]
fn pq_closed_forms_at_zero() {
    // p_2k(0) = 1/(2^k k!). Odd p vanish at 0, so d_(2k+1)(0) = -q_(2k+1)(0),
    // and sqrt(pi)/(2^(k+1) Gamma(k+3/2)) = 1/(2k+1)!! gives q_(2k+1)(0).
    let (p, q) = pq_polys(25);
    let zero = Rational::new();
    let mut fact = Integer::from(1);
    let mut double_fact = Integer::from(1);
    for k in 0..=12u32 {
        if k > 0 {
            fact *= k;
        }
        double_fact *= 2 * k + 1;
        let p_expected = Rational::from((1, Integer::from(1u32 << k) * &fact));
        assert_eq!(p[2 * k as usize].eval(&zero), p_expected, "p_{}", 2 * k);
        let q_expected = -Rational::from((1, double_fact.clone()));
        assert_eq!(
            q[2 * k as usize + 1].eval(&zero),
            q_expected,
            "q_{}",
            2 * k + 1
        );
    }
}

#[test]
fn pq_first_members() {
    let (p, q) = pq_polys(3);
    assert_eq!(p[0], RatPoly::one(Var::Chi));
    assert!(q[0].is_zero());
    assert_eq!(p[2], poly(&[(1, 2), (0, 1), (1, 2)], Var::Chi));
    assert_eq!(q[3], poly(&[(-1, 3), (0, 1), (-1, 6)], Var::Chi));
}

#[test]
fn paris_families() {
    let set = coeff_set_paris(12);
    assert_eq!(set.a[0], RatPoly::one(Var::Chi));
    assert!(set.b[0].is_zero());
    assert_eq!(set.a[1], poly(&[(0, 1), (1, 2), (0, 1), (1, 6)], Var::Chi));
    assert_eq!(set.b[5].coeff(0), r(-8, 2835));
    for k in 1..=12 {
        assert!(set.a[k].degree() <= 3 * k as isize, "deg A_{k}");
        assert!(set.b[k].degree() < 3 * k as isize, "deg B_{k}");
        // A_k has the parity of k, B_k the opposite one.
        for (i, c) in set.a[k].coeffs().iter().enumerate() {
            assert!(*c == 0 || (i + k) % 2 == 0, "A_{k} has a chi^{i} term");
        }
        for (i, c) in set.b[k].coeffs().iter().enumerate() {
            assert!(*c == 0 || (i + k) % 2 == 1, "B_{k} has a chi^{i} term");
        }
    }
}

#[test]
fn dingle_families() {
    let set = coeff_set_dingle(4);
    assert_eq!(set.a[0], RatPoly::one(Var::Xi));
    assert_eq!(set.b[1], poly(&[(2, 3), (0, 1), (1, 3)], Var::Xi));
    assert_eq!(set.b[1].coeff(0), r(2, 3));
    assert_eq!(set.a[1], poly(&[(0, 1), (-1, 1), (0, 1), (-1, 3)], Var::Xi));
}

/// Coefficients of `(1+t)^n exp(n(-t + t^2/2))` up to `t^order`, by direct
/// series multiplication.
fn direct_series(n: u32, order: usize) -> Vec<Rational> {
    let binom: Vec<Rational> = (0..=order)
        .map(|i| Rational::from(Integer::from(n).binomial(i as u32)))
        .collect();
    // exp(h) with h = -n t + n t^2/2, via f' = h' f.
    let h1 = Rational::from(-(n as i64));
    let h2 = Rational::from(n);
    let mut e = vec![Rational::from(1)];
    for m in 1..=order {
        let mut acc = Rational::from(&h1 * &e[m - 1]);
        if m >= 2 {
            acc += Rational::from(&h2 * &e[m - 2]);
        }
        e.push(acc / m as u32);
    }
    (0..=order)
        .map(|m| (0..=m).map(|i| Rational::from(&binom[i] * &e[m - i])).sum())
        .collect()
}

#[test]
fn dingle_generating_function() {
    assert_eq!(dingle_chat(0), RatPoly::one(Var::A));
    assert!(dingle_chat(1).is_zero());
    assert!(dingle_chat(2).is_zero());
    assert_eq!(dingle_chat(3), poly(&[(0, 1), (2, 1)], Var::A));
    assert_eq!(dingle_chat(4), poly(&[(0, 1), (-6, 1)], Var::A));

    let order = 12;
    for n in 1..=6u32 {
        let direct = direct_series(n, order);
        let mut fact = Integer::from(1);
        for (k, coeff) in direct.iter().enumerate() {
            if k > 0 {
                fact *= k as u32;
            }
            let expected = Rational::from(coeff * &fact);
            assert_eq!(
                dingle_chat(k).eval(&Rational::from(n)),
                expected,
                "n = {n}, k = {k}"
            );
        }
    }
}

#[test]
fn stirling_gamma_coefficients() {
    assert_eq!(stirling_gamma(0), 1);
    assert_eq!(stirling_gamma(1), r(-1, 12));
    assert_eq!(stirling_gamma(4), r(-571, 2_488_320));
}

#[test]
fn e_coefficients() {
    let e = e_coeffs(7);
    assert_eq!(e[0], r(1, 3));
    assert_eq!(e[1], r(1, 540));
    assert_eq!(e[2], r(-25, 6048));
    assert_eq!(e[5], r(2_745_493, 8_151_736_320));
    assert_eq!(
        e[7],
        Rational::from((
            Integer::from(-8_325_705_316_049i64),
            Integer::from(24_176_795_811_840_000i64)
        ))
    );
}

#[test]
fn json_round_trip() {
    for set in [coeff_set_paris(6), coeff_set_dingle(6)] {
        let json = coeff_set_to_json(&set);
        let text = serde_json::to_string(&json).unwrap();
        let back = coeff_set_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, *set);
    }
}

#[test]
fn kmax_cap() {
    assert!(check_kmax(KMAX_CAP, false).is_ok());
    assert!(check_kmax(KMAX_CAP + 1, false).is_err());
    assert!(check_kmax(KMAX_CAP + 1, true).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stirling_weighted_row_sum(k in 0usize..26, n in 1u32..6) {
        // sum_j S3(k, j) n^j counts colourings of such partitions, whose
        // EGF is exp(n (e^t - 1 - t - t^2/2)); compare with c_k at z = -n.
        let lhs: Integer = (0..=k / 3)
            .map(|j| stirling3(k, j) * Integer::from(Integer::u_pow_u(n, j as u32)))
            .sum();
        let rhs = c_poly(k).eval(&Rational::from(-(n as i64)));
        prop_assert_eq!(Rational::from(lhs), rhs);
    }

    #[test]
    fn pq_recurrence(k in 1usize..20, num in -40i64..40, den in 1i64..9) {
        // (k+1) x_{k+1} + chi x_k - x_{k-1} = 0 for both families
        let (p, q) = pq_polys(k + 1);
        let chi = r(num, den);
        for fam in [&p, &q] {
            let res = (k as u64 + 1) * fam[k + 1].eval(&chi)
                + Rational::from(&chi * &fam[k].eval(&chi))
                - fam[k - 1].eval(&chi);
            prop_assert_eq!(res, Rational::new());
        }
    }
}
