// Evaluating P, Q, gamma and Gamma through the dispatcher, at double and at
// extended precision.

use uniform_igamma::eval::{eval, EvalRequest, Target};
use uniform_igamma::PrecisionCtx;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let points = [
        (0.5, 4.0, Target::Q),
        (110.0, 100.0, Target::P),
        (100.0, 100.0, Target::Q),
        (1000.0, 1100.0, Target::GammaUpper),
        (5e5, 4.99e5, Target::GammaLower),
    ];
    for bits in [53, 200] {
        let ctx = PrecisionCtx::with_bits(bits)?;
        println!("-- {bits} bits");
        for &(a, z, target) in &points {
            let r = eval(&EvalRequest::new(a, z, target).precision(ctx))?;
            println!(
                "{target}({a}, {z}) = {:.20e}  [{} / {}, m = {}, est {:.1e}]",
                r.value, r.method, r.branch, r.m_used, r.err_estimate
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
