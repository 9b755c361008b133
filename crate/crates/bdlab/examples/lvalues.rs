//! Central L-values on the critical line through the approximate
//! functional equation, and a short growth scan.
//!
//! cargo run --release --example lvalues

use bdlab::forms::coefficients_delta;
use bdlab::lfunc::{afe_lvalue, required_n_max, weyl_scan, AfeMode, CUTOFF_NARROW, CUTOFF_WIDE};
use bdlab::pipeline::{calibrate_table, TestFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t_max = 256.0;
    let n_max = required_n_max(&bdlab::forms::FormLabel::Delta.descriptor(), t_max + 8.0, CUTOFF_WIDE).max(3000);
    let (table, _) = calibrate_table(&coefficients_delta(n_max)?, &[5, 7], &TestFunction::bump(1000.0))?;
    for t in [0.0, 10.0, 100.0, t_max] {
        let a = afe_lvalue(&table, t, CUTOFF_NARROW, AfeMode::Exact)?;
        let b = afe_lvalue(&table, t, CUTOFF_WIDE, AfeMode::Exact)?;
        println!("L(1/2 + {t}i) = {:.12} (other cutoff differs by {:.1e}, {} terms)", a.value, (a.value - b.value).norm(), a.truncation_n);
    }
    let grid: Vec<f64> = (4..=8).map(|j| 2f64.powi(j)).collect();
    let w = weyl_scan(&table, &grid, 8.0, 32, CUTOFF_NARROW)?;
    println!("window maxima grow like t^{:.3} +- {:.3} on [16, 256]", w.fit.exponent, w.fit.stderr);
    Ok(())
}
