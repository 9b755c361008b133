//! Kloosterman sums `S(n, r; p) = sum_{(a, p) = 1} e((a n + a^{-1} r) / p)`.

use super::PipelineError;
use crate::forms::curve::is_prime;
use crate::quad::e;

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r == 1 {
        Some(old_s.rem_euclid(m))
    } else {
        None
    }
}

/// `S(n, r; p)` by direct enumeration. The imaginary part cancels in exact
/// arithmetic; it is checked against `1e-10` and dropped.
pub fn kloosterman(n: i64, r: i64, p: u64) -> Result<f64, PipelineError> {
    if !is_prime(p) {
        return Err(PipelineError::NotPrime(p));
    }
    let pi = p as i64;
    let (n, r) = (n.rem_euclid(pi), r.rem_euclid(pi));
    let mut re = 0.0;
    let mut im = 0.0;
    for a in 1..pi {
        let ab = mod_inverse(a, pi).expect("p prime");
        let z = e(((a * n + ab * r) % pi) as f64 / p as f64);
        re += z.re;
        im += z.im;
    }
    if im.abs() > 1e-10 {
        return Err(PipelineError::Numerical(format!("Kloosterman sum S({n}, {r}; {p}) has imaginary part {im:e}")));
    }
    Ok(re)
}

/// All `S(n, r; p)` for residues `n, r mod p`, row-major in `n`.
#[derive(Clone, Debug)]
pub struct KloostermanTable {
    p: u64,
    values: Vec<f64>,
}

impl KloostermanTable {
    /// Uses `S(n, r; p) = S(1, n r; p)` for `p` not dividing `n`, and the
    /// Ramanujan sum when it does, so only `p` sums are enumerated.
    pub fn new(p: u64) -> Result<Self, PipelineError> {
        if !is_prime(p) {
            return Err(PipelineError::NotPrime(p));
        }
        let pi = p as i64;
        let base: Vec<f64> = (0..pi).map(|m| kloosterman(1, m, p)).collect::<Result<_, _>>()?;
        let pm1 = (p - 1) as f64;
        let mut values = vec![0.0; (p * p) as usize];
        for n in 0..pi {
            for r in 0..pi {
                values[(n * pi + r) as usize] = if n == 0 && r == 0 {
                    pm1
                } else if n == 0 || r == 0 {
                    -1.0
                } else {
                    base[((n * r) % pi) as usize]
                };
            }
        }
        Ok(KloostermanTable { p, values })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, n: i64, r: i64) -> f64 {
        let pi = self.p as i64;
        self.values[(n.rem_euclid(pi) * pi + r.rem_euclid(pi)) as usize]
    }

    /// The row `S(., r; p)` indexed by `n mod p`.
    pub fn row_for_r(&self, r: i64) -> Vec<f64> {
        (0..self.p as i64).map(|n| self.get(n, r)).collect()
    }
}

/// For `n` coprime to `p1 p2` (distinct primes), solves the congruence
/// `n = r1^{-1} p2 - r2^{-1} p1 (mod p1 p2)` for residues
/// `(r1 mod p1, r2 mod p2)`: `r1 = n^{-1} p2 (mod p1)`, `r2 = -n^{-1} p1 (mod p2)`.
pub fn split_congruence(n: i64, p1: i64, p2: i64) -> Option<(i64, i64)> {
    let n1 = mod_inverse(n, p1)?;
    let n2 = mod_inverse(n, p2)?;
    Some(((n1 * p2).rem_euclid(p1), (-n2 * p1).rem_euclid(p2)))
}

/// `r1^{-1} p2 - r2^{-1} p1 mod p1 p2`, inverses taken mod `p1` and `p2`.
pub fn congruence_residue(r1: i64, r2: i64, p1: i64, p2: i64) -> Option<i64> {
    let a = mod_inverse(r1, p1)?;
    let b = mod_inverse(r2, p2)?;
    let m = p1 * p2;
    Some(((a as i128 * p2 as i128 - b as i128 * p1 as i128).rem_euclid(m as i128)) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(kloosterman(0, 0, 7).unwrap(), 6.0);
        assert!((kloosterman(1, 1, 3).unwrap() + 1.0).abs() < 1e-14);
        assert!(kloosterman(1, 1, 9).is_err());
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(7, 7), None);
    }

    #[test]
    fn table_matches_direct() {
        let t = KloostermanTable::new(13).unwrap();
        for n in -3..20 {
            for r in -3..20 {
                assert!((t.get(n, r) - kloosterman(n, r, 13).unwrap()).abs() < 1e-12);
            }
        }
    }
}
