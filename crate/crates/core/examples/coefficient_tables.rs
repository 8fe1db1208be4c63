// Exact coefficient tables: associated Stirling numbers, the first A_k/B_k
// polynomials, the Stirling gamma_k and the E_k of the diagonal series.

use uniform_igamma::exact::{coeff_set_paris, e_coeffs, stirling3, stirling_gamma};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let row: Vec<String> = (1..=6).map(|j| stirling3(20, j).to_string()).collect();
    println!("S3(20, j), j = 1..6: {}", row.join(", "));

    let set = coeff_set_paris(3);
    for k in 0..=3 {
        println!("A_{k}(chi) = {}", set.a[k]);
        println!("B_{k}(chi) = {}", set.b[k]);
    }

    let gammas: Vec<String> = (0..=4).map(|k| stirling_gamma(k).to_string()).collect();
    println!("gamma_k: {}", gammas.join(", "));

    for (k, e) in e_coeffs(7).iter().enumerate() {
        println!("E_{k} = {e}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
