//! The bound ledger: diagonal and off-diagonal pieces of the sharp sum
//! against their predicted sizes, plus a Wilton-type scan.
//!
//! cargo run --release --example bound_ledger

use bdlab::forms::coefficients_delta;
use bdlab::pipeline::{calibrate_table, theorem_grid, wilton_scan, TestFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (table, _) = calibrate_table(&coefficients_delta(20_001)?, &[5, 7], &TestFunction::bump(1000.0))?;
    let g = theorem_grid(&table, &[1000.0], &[0.8, 1.0, 1.2], 100.0)?;
    for r in &g.rows {
        println!(
            "N = {}, T = {:.1}: |S#| = {:.3}, bound {:.3}, ratio {:.4}; diagonal {:.3e} (estimate {:.3e})",
            r.n, r.t, r.s_sharp_abs, r.theorem_bound, r.theorem_ratio, r.s_diag_sq, r.diag_estimate
        );
    }
    println!("max ratio {:.4}", g.constant);

    let gammas: Vec<f64> = (0..10).map(|j| j as f64 / 10.0).collect();
    let w = wilton_scan(&table, 10_000, &gammas, 10.0)?;
    println!("Wilton: max |S#|/(sqrt N log 2N) = {:.4} at N = 10000", w.constant);
    Ok(())
}
