// Cancellation in d_k(x) = p_k(x) d_0(x) - q_k(x) at large x: the fixed
// 53-bit route against the escalating one and the quadrature oracle.

use uniform_igamma::eval::{dk_fixed_precision, dk_sequence};
use uniform_igamma::oracle::oracle_dk;
use uniform_igamma::PrecisionCtx;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionCtx::with_bits(53)?;
    for x in [2.0, 10.0, 30.0] {
        let k = 4;
        let naive = dk_fixed_precision(x, k, 53)?.to_f64();
        let escalated = dk_sequence(x, k, &ctx)?[k].to_f64();
        let reference = oracle_dk(x, k as u32, 128)?.to_f64();
        println!(
            "d_{k}({x}): naive {naive:.9e} (rel err {:.1e}), escalated {escalated:.9e} (rel err {:.1e})",
            ((naive - reference) / reference).abs(),
            ((escalated - reference) / reference).abs(),
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
