//! JSON form of the coefficient tables.
//!
//! Rationals are `{"n": "<decimal>", "d": "<decimal>"}` in lowest terms with a
//! positive denominator; polynomials are arrays of rationals ascending in power.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::poly::{RatPoly, Var};
use super::stirling::StirlingTable;
use super::{CoeffSet, Convention, Family};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub n: String,
    pub d: String,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            n: r.numer().to_string(),
            d: r.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = Error;

    fn try_from(r: &RationalJson) -> Result<Rational> {
        let parse = |s: &str| {
            Integer::from_str_radix(s, 10)
                .map_err(|e| Error::Invalid(format!("bad integer {s:?}: {e}")))
        };
        let n = parse(&r.n)?;
        let d = parse(&r.d)?;
        if d <= 0 {
            return Err(Error::Invalid(format!(
                "denominator must be positive, got {d}"
            )));
        }
        Ok(Rational::from((n, d)))
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffSetJson {
    family: Family,
    max_k: usize,
    var: Var,
    convention: Convention,
    #[serde(rename = "A")]
    a: Vec<Vec<RationalJson>>,
    #[serde(rename = "B")]
    b: Vec<Vec<RationalJson>>,
}

fn poly_to_json(p: &RatPoly) -> Vec<RationalJson> {
    p.coeffs().iter().map(RationalJson::from).collect()
}

fn poly_from_json(coeffs: &[RationalJson], var: Var) -> Result<RatPoly> {
    let coeffs = coeffs
        .iter()
        .map(Rational::try_from)
        .collect::<Result<Vec<_>>>()?;
    Ok(RatPoly::from_coeffs(coeffs, var))
}

pub fn coeff_set_to_json(set: &CoeffSet) -> Value {
    let dto = CoeffSetJson {
        family: set.family,
        max_k: set.max_k,
        var: set.var(),
        convention: set.convention,
        a: set.a.iter().map(poly_to_json).collect(),
        b: set.b.iter().map(poly_to_json).collect(),
    };
    serde_json::to_value(dto).expect("coefficient sets always serialize")
}

pub fn coeff_set_from_json(value: &Value) -> Result<CoeffSet> {
    let dto: CoeffSetJson =
        serde_json::from_value(value.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
    if dto.a.len() != dto.max_k + 1 || dto.b.len() != dto.max_k + 1 {
        return Err(Error::Invalid(format!(
            "expected {} polynomials per family",
            dto.max_k + 1
        )));
    }
    let a = dto
        .a
        .iter()
        .map(|p| poly_from_json(p, dto.var))
        .collect::<Result<Vec<_>>>()?;
    let b = dto
        .b
        .iter()
        .map(|p| poly_from_json(p, dto.var))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffSet {
        family: dto.family,
        max_k: dto.max_k,
        a,
        b,
        convention: dto.convention,
    })
}

/// Rows `k = 0..=k_max`, each listing `S3(k, j)` for `j = 0..=k/3` as decimal strings.
pub fn stirling_table_to_json(table: &StirlingTable, k_max: usize) -> Value {
    let rows: Vec<Value> = (0..=k_max)
        .map(|k| {
            let row: Vec<String> = (0..=k / 3).map(|j| table.get(k, j).to_string()).collect();
            json!({ "k": k, "values": row })
        })
        .collect();
    json!({ "family": "s3", "k_max": k_max, "rows": rows })
}

pub fn rational_list_to_json(family: &str, values: &[Rational]) -> Value {
    let list: Vec<RationalJson> = values.iter().map(RationalJson::from).collect();
    json!({
        "family": family,
        "k_max": values.len().saturating_sub(1),
        "values": list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{coeff_set_dingle, coeff_set_paris};

    #[test]
    fn rational_shape() {
        let r = Rational::from((-8, 2835));
        let j = serde_json::to_value(RationalJson::from(&r)).unwrap();
        assert_eq!(j, json!({"n": "-8", "d": "2835"}));
    }

    #[test]
    fn coeff_sets_round_trip() {
        for set in [coeff_set_paris(6), coeff_set_dingle(4)] {
            let back = coeff_set_from_json(&coeff_set_to_json(&set)).unwrap();
            assert_eq!(back, *set);
        }
    }

    #[test]
    fn rejects_nonpositive_denominator() {
        let bad = RationalJson {
            n: "1".into(),
            d: "-3".into(),
        };
        assert!(Rational::try_from(&bad).is_err());
    }
}
