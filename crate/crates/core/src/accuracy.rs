//! Accuracy maps: the evaluator against the oracle over an `(a, z)` grid,
//! written as CSV.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{eval, EvalRequest, Method, Target, Truncation};
use crate::oracle::{oracle_gamma_lower, oracle_gamma_upper, oracle_p, oracle_q};
use crate::precision::PrecisionCtx;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            other => Err(Error::Invalid(format!("unknown grid scale {other:?}"))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
        })
    }
}

/// `count` points from `min` to `max`, both included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: Scale,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, scale: Scale) -> Result<Self> {
        let g = Grid {
            min,
            max,
            count,
            scale,
        };
        g.validate()?;
        Ok(g)
    }

    /// A one-point grid.
    pub fn single(x: f64) -> Result<Self> {
        Grid::new(x, x, 1, Scale::Linear)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Invalid("grid count must be at least 1".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0) {
            return Err(Error::Invalid(format!(
                "grid bounds must be finite and positive, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.min > self.max {
            return Err(Error::Invalid(format!(
                "grid min {} exceeds max {}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                if i == 0 {
                    return self.min;
                }
                if i == self.count - 1 {
                    return self.max;
                }
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => {
                        10f64.powf(self.min.log10() + t * (self.max.log10() - self.min.log10()))
                    }
                }
            })
            .map(|x| x.clamp(self.min, self.max))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyMapSpec {
    pub a_grid: Grid,
    pub z_grid: Grid,
    pub method: Method,
    pub m: Truncation,
    pub bits: u32,
    pub oracle_bits: u32,
    /// Function to compare; `None` picks, per point, the one the expansion
    /// computes directly (`Gamma` for `z >= a`, `gamma` below).
    pub function: Option<Target>,
    pub output: Option<PathBuf>,
}

impl AccuracyMapSpec {
    pub fn new(a_grid: Grid, z_grid: Grid) -> Self {
        AccuracyMapSpec {
            a_grid,
            z_grid,
            method: Method::Paris,
            m: Truncation::Adaptive,
            bits: 53,
            oracle_bits: 128,
            function: None,
            output: None,
        }
    }
}

/// One CSV row. Floats print as the shortest decimal that parses back to the
/// same `f64`. `value` and `oracle_value` are decimal strings that round-trip
/// at their own precision, since the unnormalized functions leave the `f64`
/// range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccuracyRow {
    pub a: f64,
    pub z: f64,
    pub chi: f64,
    pub method: String,
    pub m: u32,
    pub value: String,
    pub oracle_value: String,
    pub rel_err: f64,
    pub err_estimate: f64,
}

fn oracle(target: Target, a: f64, z: f64, bits: u32) -> Result<Float> {
    let v = match target {
        Target::GammaLower => oracle_gamma_lower(a, z, bits),
        Target::GammaUpper => oracle_gamma_upper(a, z, bits),
        Target::P => oracle_p(a, z, bits),
        Target::Q => oracle_q(a, z, bits),
    }?;
    Ok(v.value)
}

fn point(spec: &AccuracyMapSpec, ctx: PrecisionCtx, a: f64, z: f64) -> Result<AccuracyRow> {
    let target = spec.function.unwrap_or(if z >= a {
        Target::GammaUpper
    } else {
        Target::GammaLower
    });
    let res = eval(
        &EvalRequest::new(a, z, target)
            .method(spec.method)
            .truncation(spec.m)
            .precision(ctx),
    )
    .map_err(|e| with_point(e, a, z))?;
    let reference = oracle(target, a, z, spec.oracle_bits).map_err(|e| with_point(e, a, z))?;
    let p = spec.oracle_bits.max(ctx.bits()) + 16;
    let rel = Float::with_val(p, &res.value - &reference) / &reference;
    Ok(AccuracyRow {
        a,
        z,
        chi: (z - a) / z.sqrt(),
        method: res.method.to_string(),
        m: res.m_used,
        value: res.value.to_string_radix(10, None),
        oracle_value: reference.to_string_radix(10, None),
        rel_err: rel.to_f64().abs(),
        err_estimate: res.err_estimate,
    })
}

fn with_point(e: Error, a: f64, z: f64) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("at a = {a}, z = {z}: {m}")),
        Error::Branch(m) => Error::Branch(format!("at a = {a}, z = {z}: {m}")),
        Error::Invalid(m) => Error::Invalid(format!("at a = {a}, z = {z}: {m}")),
        other => other,
    }
}

/// Evaluates every grid point (in parallel), rows ordered by `a` then `z`.
pub fn compute(spec: &AccuracyMapSpec) -> Result<Vec<AccuracyRow>> {
    spec.a_grid.validate()?;
    spec.z_grid.validate()?;
    let ctx = PrecisionCtx::with_bits(spec.bits)?;
    let zs = spec.z_grid.points();
    let pairs: Vec<(f64, f64)> = spec
        .a_grid
        .points()
        .into_iter()
        .flat_map(|a| zs.iter().map(move |&z| (a, z)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(a, z)| point(spec, ctx, a, z))
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    let text = e.to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        _ => Error::Io(text),
    }
}

pub fn write_csv<W: std::io::Write>(rows: &[AccuracyRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[AccuracyRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    write_csv(rows, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = Grid::new(10.0, 1000.0, 3, Scale::Log).unwrap();
        let p = g.points();
        assert_eq!(p[0], 10.0);
        assert_eq!(p[1], 100.0);
        assert_eq!(p[2], 1000.0);
        assert_eq!(Grid::single(7.0).unwrap().points(), vec![7.0]);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(1.0, 2.0, 0, Scale::Linear).is_err());
        assert!(Grid::new(3.0, 2.0, 2, Scale::Linear).is_err());
        assert!(Grid::new(0.0, 2.0, 2, Scale::Log).is_err());
    }

    #[test]
    fn header_and_round_trip() {
        let spec = AccuracyMapSpec::new(Grid::single(50.0).unwrap(), Grid::single(60.0).unwrap());
        let rows = compute(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "a,z,chi,method,m,value,oracle_value,rel_err,err_estimate"
        );
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[5], rows[0].value);
        let v: f64 = fields[5].parse().unwrap();
        assert!((v / fields[6].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }
}
