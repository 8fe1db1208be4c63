//! `igamma` command line: `eval`, `coeffs`, `accuracy-map` and `verify`.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 usage or
//! domain error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::json;

use crate::accuracy::{self, AccuracyMapSpec, Grid, Scale};
use crate::error::{Error, Result};
use crate::eval::{eval, EvalRequest, Method, Target, Truncation};
use crate::exact::{
    check_kmax, coeff_set_dingle, coeff_set_paris, coeff_set_to_json, e_coeffs,
    rational_list_to_json, stirling3_table, stirling_gamma, stirling_table_to_json, CoeffSet,
};
use crate::precision::PrecisionCtx;
use crate::verify::{self, ReferenceData, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "igamma",
    version,
    about = "Incomplete gamma functions from uniform asymptotic expansions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate P, Q, gamma or Gamma at one point.
    Eval(EvalArgs),
    /// Dump an exact coefficient table.
    Coeffs(CoeffsArgs),
    /// Compare the evaluator with the oracle over a grid and write CSV.
    AccuracyMap(AccuracyArgs),
    /// Recompute the published tables and examples.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub z: f64,
    /// P, Q, lower (gamma) or upper (Gamma).
    #[arg(long, default_value = "Q")]
    pub function: Target,
    /// auto, paris, dingle or diagonal.
    #[arg(long, default_value = "auto")]
    pub method: Method,
    /// Truncation order, or "adaptive".
    #[arg(long, default_value = "adaptive", value_parser = parse_truncation)]
    pub m: Truncation,
    #[arg(long, default_value_t = 53)]
    pub bits: u32,
    /// Largest |chi| routed to the diagonal series by `--method auto`.
    #[arg(long)]
    pub diagonal_threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffFamily {
    S3,
    Paris,
    Dingle,
    E,
    GammaStirling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub family: CoeffFamily,
    #[arg(long, default_value_t = 5)]
    pub kmax: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    pub format: TableFormat,
    /// Allow kmax above the default cap.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct AccuracyArgs {
    #[arg(long, default_value_t = 10.0)]
    pub a_min: f64,
    #[arg(long, default_value_t = 1e4)]
    pub a_max: f64,
    #[arg(long, default_value_t = 10)]
    pub a_count: usize,
    #[arg(long, default_value = "log")]
    pub a_scale: Scale,
    #[arg(long, default_value_t = 10.0)]
    pub z_min: f64,
    #[arg(long, default_value_t = 1e4)]
    pub z_max: f64,
    #[arg(long, default_value_t = 10)]
    pub z_count: usize,
    #[arg(long, default_value = "log")]
    pub z_scale: Scale,
    #[arg(long, default_value = "paris")]
    pub method: Method,
    #[arg(long, default_value = "adaptive", value_parser = parse_truncation)]
    pub m: Truncation,
    #[arg(long, default_value_t = 53)]
    pub bits: u32,
    #[arg(long, default_value_t = 128)]
    pub oracle_bits: u32,
    /// Compare this function instead of the one each expansion computes directly.
    #[arg(long)]
    pub function: Option<Target>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these checks (s3, paris, e, gamma, d4, dingle, identity).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Corrupt the reference data of a check before running (self-test of the suite).
    #[arg(long, hide = true, value_delimiter = ',')]
    pub inject_fault: Vec<String>,
}

fn parse_truncation(s: &str) -> std::result::Result<Truncation, String> {
    if s == "adaptive" || s == "auto" {
        return Ok(Truncation::Adaptive);
    }
    s.parse::<u32>()
        .map(Truncation::Fixed)
        .map_err(|_| format!("expected a non-negative integer or \"adaptive\", got {s:?}"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Error::OutputClosed) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error that escaped a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OutputClosed => EXIT_OK,
        Error::Domain(_) | Error::Branch(_) | Error::KmaxCap { .. } | Error::Invalid(_) => {
            EXIT_USAGE
        }
        Error::PrecisionCeiling { .. } | Error::NonConvergence { .. } | Error::Io(_) => {
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Coeffs(a) => cmd_coeffs(&a, out),
        Command::AccuracyMap(a) => cmd_accuracy_map(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    }
}

/// Decimal digits that represent a `bits`-bit value.
fn digits_for(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let ctx = PrecisionCtx::with_bits(args.bits)?;
    let mut req = EvalRequest::new(args.a, args.z, args.function)
        .method(args.method)
        .truncation(args.m)
        .precision(ctx);
    if let Some(t) = args.diagonal_threshold {
        req = req.diagonal_threshold(t);
    }
    let res = eval(&req)?;
    let value = res.value.to_string_radix(10, Some(digits_for(args.bits)));
    let transition_name = if res.method == Method::Dingle {
        "xi"
    } else {
        "chi"
    };
    match args.format {
        Format::Json => {
            let doc = json!({
                "value": value,
                "branch": res.branch.to_string(),
                "chi": res.transition,
                "m_used": res.m_used,
                "err_estimate": res.err_estimate,
                "bits_used": res.precision_bits_used,
            });
            writeln!(out, "{doc}")?;
        }
        Format::Text => {
            writeln!(out, "{}(a={}, z={}) = {value}", res.target, args.a, args.z)?;
            writeln!(out, "method        {}", res.method)?;
            writeln!(out, "branch        {}", res.branch)?;
            writeln!(out, "{transition_name:<13} {}", res.transition)?;
            writeln!(out, "m_used        {}", res.m_used)?;
            writeln!(out, "err_estimate  {:e}", res.err_estimate)?;
            writeln!(out, "bits_used     {}", res.precision_bits_used)?;
        }
    }
    Ok(EXIT_OK)
}

fn rational_cells(r: &Rational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

fn coeff_set_csv(set: &CoeffSet, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["k", "poly", "power", "num", "den"])
        .map_err(io)?;
    for (name, family) in [("A", &set.a), ("B", &set.b)] {
        for (k, p) in family.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.cmp0().is_eq() {
                    continue;
                }
                let (n, d) = rational_cells(c);
                w.write_record([k.to_string(), name.into(), i.to_string(), n, d])
                    .map_err(io)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn rational_list_csv(values: &[Rational], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["k", "num", "den"]).map_err(io)?;
    for (k, v) in values.iter().enumerate() {
        let (n, d) = rational_cells(v);
        w.write_record([k.to_string(), n, d]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_coeffs(args: &CoeffsArgs, out: &mut dyn Write) -> Result<i32> {
    check_kmax(args.kmax, args.force)?;
    let k = args.kmax;
    match (args.family, args.format) {
        (CoeffFamily::S3, TableFormat::Json) => {
            writeln!(out, "{}", stirling_table_to_json(&stirling3_table(k), k))?;
        }
        (CoeffFamily::S3, TableFormat::Csv) => {
            let table = stirling3_table(k);
            let mut w = csv::Writer::from_writer(out);
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["k", "j", "value"]).map_err(io)?;
            for n in 0..=k {
                for j in 0..=n / 3 {
                    w.write_record([n.to_string(), j.to_string(), table.get(n, j).to_string()])
                        .map_err(io)?;
                }
            }
            w.flush()?;
        }
        (CoeffFamily::Paris | CoeffFamily::Dingle, format) => {
            let set = if args.family == CoeffFamily::Paris {
                coeff_set_paris(k)
            } else {
                coeff_set_dingle(k)
            };
            match format {
                TableFormat::Json => writeln!(out, "{}", coeff_set_to_json(&set))?,
                TableFormat::Csv => coeff_set_csv(&set, out)?,
            }
        }
        (CoeffFamily::E | CoeffFamily::GammaStirling, format) => {
            let (name, values) = if args.family == CoeffFamily::E {
                ("e", e_coeffs(k))
            } else {
                ("gamma-stirling", (0..=k).map(stirling_gamma).collect())
            };
            match format {
                TableFormat::Json => writeln!(out, "{}", rational_list_to_json(name, &values))?,
                TableFormat::Csv => rational_list_csv(&values, out)?,
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_accuracy_map(args: &AccuracyArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = AccuracyMapSpec {
        a_grid: Grid::new(args.a_min, args.a_max, args.a_count, args.a_scale)?,
        z_grid: Grid::new(args.z_min, args.z_max, args.z_count, args.z_scale)?,
        method: args.method,
        m: args.m,
        bits: args.bits,
        oracle_bits: args.oracle_bits,
        function: args.function,
        output: args.output.clone(),
    };
    let rows = accuracy::compute(&spec)?;
    match &spec.output {
        Some(path) => {
            accuracy::write_csv_file(&rows, path)?;
            let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
            let over = rows
                .iter()
                .filter(|r| r.rel_err > 10.0 * r.err_estimate)
                .count();
            writeln!(
                out,
                "wrote {} rows to {}; max rel_err {worst:e}; {over} rows above 10x err_estimate",
                rows.len(),
                path.display()
            )?;
        }
        None => accuracy::write_csv(&rows, out)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut reference = ReferenceData::published();
    for name in &args.inject_fault {
        reference.corrupt(name)?;
    }
    let outcomes = verify::run(&reference, &args.only, args.seed)?;
    let mut failed = 0;
    for c in &outcomes {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {:<9} {}", c.name, c.detail)?;
        if !c.passed {
            failed += 1;
        }
    }
    writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}
