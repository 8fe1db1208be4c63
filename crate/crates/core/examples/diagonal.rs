// Q(a, a) from the E_k series, against the oracle.

use uniform_igamma::eval::q_diagonal;
use uniform_igamma::oracle::oracle_q;
use uniform_igamma::PrecisionCtx;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionCtx::with_bits(128)?;
    for a in [10.0, 100.0, 1000.0, 10000.0] {
        let r = q_diagonal(a, 7, &ctx)?;
        let o = oracle_q(a, a, 128)?;
        let diff = rug::Float::with_val(160, &r.value - &o.value).to_f64();
        println!(
            "Q({a}, {a}) = {:.25}  diff {diff:.1e}  est {:.1e}",
            r.value, r.err_estimate
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
