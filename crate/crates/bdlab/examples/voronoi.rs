//! Calibrate the Voronoi root number for Delta and check the summation
//! formula with additive twists.
//!
//! cargo run --release --example voronoi

use bdlab::forms::coefficients_delta;
use bdlab::pipeline::{calibrate_table, voronoi_check, TestFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = TestFunction::bump(1000.0);
    let raw = coefficients_delta(3000)?;
    let (table, cals) = calibrate_table(&raw, &[5, 7], &f)?;
    for c in &cals {
        println!("c = {}: eta = {}, residuals {:.1e} (winner) vs {:.1e} (loser)", c.c, c.eta, c.winner_residual, c.loser_residual);
    }
    for (a, c) in [(1, 5), (2, 5), (3, 7)] {
        let r = voronoi_check(&table, a, c, &f)?;
        println!("a/c = {a}/{c}: lhs {:.12}, rhs {:.12}, relative residual {:.2e}", r.lhs, r.rhs, r.relative_residual);
    }
    Ok(())
}
