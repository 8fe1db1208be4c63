// The sqrt(a) expansion under both sign conventions for its coefficients.
// Only one of them reproduces Gamma(a+1, z).

use uniform_igamma::eval::{gamma_dingle_with, Side};
use uniform_igamma::exact::{coeff_set_dingle, Convention, JSign, DINGLE_CONVENTION};
use uniform_igamma::oracle::oracle_gamma_upper;
use uniform_igamma::PrecisionCtx;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (a, z) = (100.0, 120.0);
    let ctx = PrecisionCtx::with_bits(53)?;
    let reference = oracle_gamma_upper(a + 1.0, z, 128)?.to_f64();
    for j_sign in [JSign::Direct, JSign::Alternating] {
        let conv = Convention {
            j_sign,
            b_reversed: true,
        };
        let r = gamma_dingle_with(a, z, 4, Side::Upper, conv, &ctx)?;
        let err = ((r.to_f64() - reference) / reference).abs();
        println!("{j_sign:?}: Gamma({}, {z}) rel err {err:.2e}", a + 1.0);
    }
    println!("chosen convention: {DINGLE_CONVENTION:?}");
    let set = coeff_set_dingle(1);
    println!("A^_1(xi) = {}, B^_1(xi) = {}", set.a[1], set.b[1]);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
