//! Numerical checks of the oscillatory-integral lemmas: non-stationary
//! decay, the first and second derivative tests, and stationary phase.
//!
//! cargo run --release --example stationary_phase

use bdlab::quad::appendix::{
    check_nonstationary_decay, check_second_derivative_test, check_second_derivative_test_2d, check_stationary_scaling,
};

fn main() {
    let a1 = check_nonstationary_decay(&[10.0, 20.0, 40.0, 80.0, 160.0, 320.0], &[20.0, 40.0, 80.0, 160.0, 320.0]);
    let exps: Vec<String> = a1.sharpness.iter().map(|f| format!("{:.2}", f.exponent)).collect();
    println!("non-stationary decay: pass {}, sharpness exponents [{}]", a1.pass, exps.join(", "));

    let lambdas = [100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0];
    let a2 = check_second_derivative_test(&[10.0, 100.0, 1000.0, 1e4], &[0.0, 0.25, 0.5, 1.0, 2.0], &lambdas);
    println!("second derivative test: pass {}, scaling exponent {:.3}", a2.pass, a2.scaling.exponent);

    let a3 = check_second_derivative_test_2d(&[20.0, 50.0, 100.0, 200.0], &[50.0, 100.0, 200.0, 400.0]);
    println!("two-dimensional version: pass {}, scaling exponent {:.3}", a3.pass, a3.scaling.exponent);

    let a4 = check_stationary_scaling(&[50.0, 100.0, 200.0, 400.0, 800.0, 1600.0]);
    for r in &a4.rows {
        println!("  lambda {:>6}: value {:.3e}, derivative {:.6e} (exact {:.6e})", r.lambda, r.value, r.derivative_fd, r.derivative_exact);
    }
    println!("stationary phase: pass {}, exponents {:.3} and {:.3}", a4.pass, a4.j0.exponent, a4.j1.exponent);
}
