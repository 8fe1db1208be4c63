// Oracle values with their self-verified precision, plus two identities
// they satisfy.

use rug::Float;
use uniform_igamma::oracle::{agreement_bits, oracle_gamma_upper, oracle_p, oracle_q};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (a, z) = (100.0, 100.0);
    let p = oracle_p(a, z, 256)?;
    let q = oracle_q(a, z, 256)?;
    println!(
        "P({a}, {z}) = {:.40}  ({} verified bits)",
        p.value, p.verified_bits
    );
    println!(
        "Q({a}, {z}) = {:.40}  ({} verified bits)",
        q.value, q.verified_bits
    );
    let one = Float::with_val(256, &p.value + &q.value);
    println!(
        "P + Q = 1 to {} bits",
        agreement_bits(&one, &Float::with_val(256, 1))
    );

    // Gamma(a+1, z) = a Gamma(a, z) + z^a e^-z
    let (a, z) = (7.25, 3.0);
    let lhs = oracle_gamma_upper(a + 1.0, z, 128)?;
    let g = oracle_gamma_upper(a, z, 128)?;
    let zf = Float::with_val(256, z);
    let rhs =
        Float::with_val(256, &g.value * a) + (Float::with_val(256, zf.ln_ref()) * a - &zf).exp();
    println!(
        "recurrence holds to {} bits",
        agreement_bits(&lhs.value, &rhs)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
