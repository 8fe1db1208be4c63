//! 3-associated Stirling numbers of the second kind and the Taylor
//! coefficients `c_k(z)` of `exp(-z (e^t - 1 - t - t^2/2))`.

use std::sync::{Arc, OnceLock, RwLock};

use rug::{Integer, Rational};

use super::poly::{RatPoly, Var};

/// Exact table of `S3(k, j)` for `0 <= k <= k_max`.
///
/// Only `j <= k/3` is stored; everything else is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<Integer>>,
}

impl StirlingTable {
    /// Fills the table with `S3(n+1, j) = j S3(n, j) + C(n, 2) S3(n-2, j-1)`.
    pub fn build(k_max: usize) -> Self {
        let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(k_max + 1);
        rows.push(vec![Integer::from(1)]);
        for n in 0..k_max {
            let k = n + 1;
            let mut row = vec![Integer::new(); k / 3 + 1];
            let choose = Integer::from(n * n.saturating_sub(1) / 2);
            for (j, slot) in row.iter_mut().enumerate().skip(1) {
                let mut v = Integer::new();
                if let Some(prev) = rows[n].get(j) {
                    v += Integer::from(prev * j as u64);
                }
                if n >= 2 {
                    if let Some(prev) = rows[n - 2].get(j - 1) {
                        v += Integer::from(prev * &choose);
                    }
                }
                *slot = v;
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn k_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S3(k, j)`, zero outside the stored triangle.
    pub fn get(&self, k: usize, j: usize) -> Integer {
        self.rows
            .get(k)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_default()
    }

    /// Nonzero-capable entries `(k, j, S3(k, j))` with `j <= k/3`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Integer)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(k, row)| row.iter().enumerate().map(move |(j, v)| (k, j, v)))
    }
}

fn table_cache() -> &'static RwLock<Arc<StirlingTable>> {
    static CACHE: OnceLock<RwLock<Arc<StirlingTable>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let table = StirlingTable::build(32);
        debug_assert!(agrees_with_c_poly(&table, 32));
        RwLock::new(Arc::new(table))
    })
}

/// Shared table covering at least `k_max`.
pub fn stirling3_table(k_max: usize) -> Arc<StirlingTable> {
    {
        let cached = table_cache().read().unwrap();
        if cached.k_max() >= k_max {
            return Arc::clone(&cached);
        }
    }
    let mut slot = table_cache().write().unwrap();
    if slot.k_max() < k_max {
        let table = StirlingTable::build(k_max.max(2 * slot.k_max()));
        debug_assert!(agrees_with_c_poly(&table, k_max.min(60)));
        *slot = Arc::new(table);
    }
    Arc::clone(&slot)
}

fn agrees_with_c_poly(table: &StirlingTable, k_max: usize) -> bool {
    (0..=k_max).all(|k| (0..=k / 3).all(|j| stirling3_from_c_poly(k, j) == table.get(k, j)))
}

/// `S3(k, j)`. Zero for `j > k/3`.
pub fn stirling3(k: usize, j: usize) -> Integer {
    if j > k / 3 {
        return Integer::new();
    }
    stirling3_table(k).get(k, j)
}

/// `S3(k, j)` read off `c_k(z) = sum_j (-1)^j S3(k, j) z^j`.
pub fn stirling3_from_c_poly(k: usize, j: usize) -> Integer {
    let c = c_poly(k).coeff(j);
    let mut s = c.into_numer_denom().0;
    if j % 2 == 1 {
        s = -s;
    }
    s
}

fn c_cache() -> &'static RwLock<Arc<Vec<RatPoly>>> {
    static CACHE: OnceLock<RwLock<Arc<Vec<RatPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Arc::new(Vec::new())))
}

/// Taylor coefficient `c_k(z)` of `H(t; z) = exp(-z (e^t - 1 - t - t^2/2))`,
/// from `c_{k+1} = -z sum_{j=2..k} C(k, j) c_{k-j}` with `c_0 = 1`, `c_1 = c_2 = 0`.
pub fn c_poly(k: usize) -> RatPoly {
    {
        let cached = c_cache().read().unwrap();
        if let Some(p) = cached.get(k) {
            return p.clone();
        }
    }
    let mut slot = c_cache().write().unwrap();
    let mut polys: Vec<RatPoly> = slot.as_ref().clone();
    while polys.len() <= k {
        let next = polys.len();
        let p = match next {
            0 => RatPoly::one(Var::Z),
            1 | 2 => RatPoly::zero(Var::Z),
            _ => {
                let n = next - 1;
                let mut acc = RatPoly::zero(Var::Z);
                let mut binom = Integer::from(1);
                for j in 1..=n {
                    binom = binom * (n - j + 1) as u64 / j as u64;
                    if j >= 2 {
                        acc.add_scaled(&polys[n - j], &Rational::from(&binom));
                    }
                }
                acc.shift(1).scale(&Rational::from(-1))
            }
        };
        polys.push(p);
    }
    let out = polys[k].clone();
    *slot = Arc::new(polys);
    out
}
