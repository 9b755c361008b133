//! Hecke eigenvalues of the two built-in forms.
//!
//! cargo run --release --example forms

use bdlab::forms::{divisor_counts, FormLabel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_max = 10_000;
    let d = divisor_counts(n_max);
    for label in [FormLabel::Delta, FormLabel::Level11] {
        let table = label.build(n_max)?;
        let desc = table.descriptor();
        println!("{label}: level {}, weight {}", desc.level, desc.weight);
        let ints = table.integers().expect("built-in tables carry integers");
        println!("  a(1..=12)      = {:?}", &ints[1..=12]);
        let lam: Vec<String> = (1..=6).map(|n| format!("{:.4}", table.lambda(n))).collect();
        println!("  lambda(1..=6)  = [{}]", lam.join(", "));
        // Deligne: |lambda(n)| <= d(n) away from the level
        let worst = (1..=n_max).map(|n| table.lambda(n).abs() / d[n] as f64).fold(0.0, f64::max);
        let mean_square = (1..=n_max).map(|n| table.lambda(n).powi(2)).sum::<f64>() / n_max as f64;
        println!("  max |lambda(n)|/d(n) = {worst:.4}, mean of lambda^2 up to {n_max} = {mean_square:.4}");
    }
    Ok(())
}
