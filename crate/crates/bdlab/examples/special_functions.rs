//! Bessel functions, complex log-Gamma and the bump weight.
//!
//! cargo run --release --example special_functions

use bdlab::special::{bessel_i_scaled, bessel_j, bump_u, log_gamma_complex, make_bump_u};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (nu, x) in [(0, 0.5), (1, 150.0), (11, 2500.0), (64, 1e6)] {
        println!("J_{nu}({x}) = {:.15e}", bessel_j(nu, x)?);
    }
    for (nu, x) in [(11, 5.0), (64, 1e6)] {
        println!("e^-x I_{nu}({x}) = {:.15e}", bessel_i_scaled(nu, x)?);
    }
    let s = Complex64::new(6.5, -1024.0);
    println!("log Gamma({s}) = {}", log_gamma_complex(s)?);

    let u = make_bump_u();
    println!("U(1.5) = {:.15}", bump_u(1.5));
    println!("Mellin transform of U at 3/4 = {:.15}", u.mellin_three_quarters());
    Ok(())
}
