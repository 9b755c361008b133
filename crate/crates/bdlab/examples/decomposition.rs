//! Split a smoothed GL(2) sum into its delta-method pieces and compare the
//! reassembled value with the direct sum.
//!
//! cargo run --release --example decomposition

use bdlab::forms::coefficients_delta;
use bdlab::pipeline::{calibrate_table, s_decomposed, DecompositionConfig, PhaseSpec, Phi, TestFunction, WeightedPhase};
use bdlab::special::make_weight_v;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, t, k, p) = (1000.0, 200.0, 20.0, 100.0);
    let (table, _) = calibrate_table(&coefficients_delta(8001)?, &[5, 7], &TestFunction::bump(1000.0))?;
    let phase = PhaseSpec::new(t, 0.0, n, Phi::NegLog)?;
    let wp = WeightedPhase::new(phase, make_weight_v(4.0, 2.0)?, 0.05)?;
    let r = s_decomposed(&table, &wp, &DecompositionConfig::new(k, p), 10.0)?;
    println!("N = {n}, T = {t}, K = {k}, P = {p}, X = {}, {} primes", r.x, r.prime_count);
    println!("direct     {:.10}", r.s_direct);
    println!("decomposed {:.10}", r.s_decomposed);
    println!("residual {:.3e} against envelope {:.3e} (ratio {:.4})", r.residual, r.envelope, r.constant);
    Ok(())
}
