//! Exact integer q-series for eta products.

use super::FormsError;

/// Exponents and signs of `prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}`,
/// `k` over all integers, up to degree `max_deg`, in increasing degree.
pub fn pentagonal_terms(max_deg: usize) -> Vec<(usize, i8)> {
    let mut out = vec![(0usize, 1i8)];
    let mut k: usize = 1;
    loop {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        let a = k * (3 * k - 1) / 2;
        let b = k * (3 * k + 1) / 2;
        if a > max_deg {
            break;
        }
        out.push((a, sign));
        if b <= max_deg {
            out.push((b, sign));
        }
        k += 1;
    }
    out
}

/// Multiplies `coeffs` in place by `prod (1 - q^{step n})`, truncating at
/// the current length. `offset` is added to the reported index on overflow
/// so the error names the coefficient the caller cares about.
pub fn mul_euler_in_place(coeffs: &mut [i128], step: usize, offset: usize) -> Result<(), FormsError> {
    let len = coeffs.len();
    if len == 0 {
        return Ok(());
    }
    let terms: Vec<(usize, i8)> = pentagonal_terms((len - 1) / step)
        .into_iter()
        .skip(1)
        .map(|(d, s)| (d * step, s))
        .collect();
    for i in (0..len).rev() {
        let mut acc = coeffs[i];
        for &(d, s) in &terms {
            if d > i {
                break;
            }
            let v = coeffs[i - d];
            acc = if s > 0 { acc.checked_add(v) } else { acc.checked_sub(v) }
                .ok_or(FormsError::Overflow { n: (i + offset) as u64 })?;
        }
        coeffs[i] = acc;
    }
    Ok(())
}

/// `tau(1..=n_max)` from `q prod (1 - q^n)^24`, by 24 successive
/// multiplications with the pentagonal series. Index 0 of the result is
/// `tau(1)`.
pub fn ramanujan_tau(n_max: usize) -> Result<Vec<i128>, FormsError> {
    let mut c = vec![0i128; n_max];
    if n_max == 0 {
        return Ok(c);
    }
    c[0] = 1;
    for _ in 0..24 {
        mul_euler_in_place(&mut c, 1, 1)?;
    }
    Ok(c)
}

/// Coefficients of `eta(z)^2 eta(11 z)^2 = q prod (1-q^n)^2 (1-q^{11n})^2`
/// for `n = 1..=n_max`.
pub fn eta_product_11(n_max: usize) -> Result<Vec<i128>, FormsError> {
    let mut c = vec![0i128; n_max];
    if n_max == 0 {
        return Ok(c);
    }
    c[0] = 1;
    for _ in 0..2 {
        mul_euler_in_place(&mut c, 1, 1)?;
        mul_euler_in_place(&mut c, 11, 1)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_tau_values() {
        let t = ramanujan_tau(12).unwrap();
        assert_eq!(&t[..], &[1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]);
    }

    #[test]
    fn euler_product_by_brute_force() {
        // prod_{n<=9} (1 - q^n) expanded directly, degree < 10
        let mut brute = vec![0i128; 10];
        brute[0] = 1;
        for n in 1..10 {
            for i in (n..10).rev() {
                brute[i] -= brute[i - n];
            }
        }
        let mut c = vec![0i128; 10];
        c[0] = 1;
        mul_euler_in_place(&mut c, 1, 0).unwrap();
        assert_eq!(c, brute);
    }

    #[test]
    fn overflow_names_the_coefficient() {
        // degree 5 picks up +c[0] from the pentagonal term q^5
        let mut c = vec![0i128; 6];
        c[0] = i128::MAX;
        c[5] = 1;
        let err = mul_euler_in_place(&mut c, 1, 1).unwrap_err();
        assert_eq!(err, FormsError::Overflow { n: 6 });
    }
}
