//! Poisson summation in the r-variable modulo p: the twisted sum over r
//! against its dual expansion.
//!
//! cargo run --release --example poisson

use bdlab::forms::FormLabel;
use bdlab::pipeline::{poisson_r_identity_check, JSetup, PhaseSpec, Phi, VNatural};
use bdlab::special::make_weight_v;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut desc = FormLabel::Delta.descriptor();
    desc = desc.with_eta(num_complex::Complex64::new(1.0, 0.0))?;
    let weight = VNatural::new(make_weight_v(4.0, 2.0)?, &desc)?;
    for (t, gamma, phi, n, p) in [
        (1000.0, 0.0, Phi::NegLog, 50_000, 31),
        (500.0, 0.0, Phi::Power { beta: 1.5, sign: 1.0 }, 80_000, 37),
    ] {
        let phase = PhaseSpec::new(t, gamma, 1000.0, phi)?;
        let r = poisson_r_identity_check(&JSetup { phase, weight: weight.clone(), level: 1.0 }, n, p)?;
        println!("T = {t}, n = {n}, p = {p}: {:.10} vs {:.10}, relative difference {:.2e}", r.lhs, r.rhs, r.relative_difference);
    }
    Ok(())
}
