//! The Bessel integral behind the delta symbol: its diagonal main term,
//! decay off the diagonal, Weber's identity, and the delta identity on a
//! small grid.
//!
//! cargo run --release --example bessel_delta

use bdlab::besseldelta::{bessel_integral, delta_grid, diagonal_main_term, weber_identity_check, DeltaParams};
use bdlab::special::make_bump_u;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = make_bump_u();
    let k = 12;
    for x in [1e3, 4e3, 1.6e4, 6.4e4] {
        let i = bessel_integral(1.0, 1.0, x, k, &u)?.value;
        let main = diagonal_main_term(1.0, x, k, &u);
        println!("X = {x:>7}: I = {:.6}, main term {:.6}, |I - main|/X^(1/4) = {:.2e}", i, main, (i - main).norm() / x.powf(0.25));
    }
    for b in [1.05, 1.2, 1.5, 2.0] {
        let i = bessel_integral(1.0, b, 1e4, k, &u)?.value;
        println!("b = {b}: |I(1, b)|/X = {:.3e}", i.norm() / 1e4);
    }

    let w = weber_identity_check(1.0, 1.05, 100.0, k)?;
    println!("Weber: {:.15e} vs {:.15e}", w.lhs, w.rhs);

    let params = DeltaParams::new(31, 1e3, 1e6, k, 0.05, u)?;
    let rs: Vec<i64> = (1000..1050).collect();
    let d = delta_grid(&params, &rs, 10.0)?;
    println!(
        "delta identity on a 50 x 50 grid: diagonal constant {:.3}, off-diagonal max {:.2e}, {} congruent cells",
        d.diagonal_constant, d.offdiagonal_max, d.congruent_cells
    );
    Ok(())
}
