// A small accuracy map written as CSV to stdout.

use uniform_igamma::accuracy::{compute, write_csv, AccuracyMapSpec, Grid, Scale};
use uniform_igamma::eval::Truncation;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = AccuracyMapSpec::new(
        Grid::new(10.0, 1e3, 3, Scale::Log)?,
        Grid::new(10.0, 1e3, 3, Scale::Log)?,
    );
    spec.m = Truncation::Fixed(6);
    let rows = compute(&spec)?;
    write_csv(&rows, std::io::stdout().lock())?;
    let worst = rows
        .iter()
        .map(|r| r.rel_err / r.err_estimate)
        .fold(0.0, f64::max);
    println!("largest rel_err / err_estimate: {worst:.2}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
