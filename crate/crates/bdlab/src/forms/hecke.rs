//! Extension of prime coefficients to all `n` by the Hecke relations.

use std::collections::BTreeMap;

use super::FormsError;

/// Smallest prime factor of every `n <= n_max` (index 0 and 1 hold 0).
pub fn smallest_prime_factors(n_max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n_max + 1];
    for i in 2..=n_max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n_max {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Primes up to `n_max` by the sieve of Eratosthenes.
pub fn primes_up_to(n_max: usize) -> Vec<u64> {
    smallest_prime_factors(n_max)
        .iter()
        .enumerate()
        .filter(|&(i, &p)| i >= 2 && p as usize == i)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Divisor counts `d(n)` for `n <= n_max`.
pub fn divisor_counts(n_max: usize) -> Vec<u32> {
    let mut d = vec![0u32; n_max + 1];
    for i in 1..=n_max {
        let mut j = i;
        while j <= n_max {
            d[j] += 1;
            j += i;
        }
    }
    d
}

/// Integer coefficients `a(1..=n_max)` (index 0 unused) from `a(p)`:
/// `a(p^{j+1}) = a(p) a(p^j) - p^{k-1} a(p^{j-1})` for `p` not dividing the
/// level, `a(p^{j+1}) = a(p) a(p^j)` otherwise, and multiplicativity.
pub fn extend_integer(
    prime_values: &BTreeMap<u64, i128>,
    level: u64,
    weight: u32,
    n_max: usize,
) -> Result<Vec<i128>, FormsError> {
    let spf = smallest_prime_factors(n_max);
    let mut a = vec![0i128; n_max + 1];
    if n_max >= 1 {
        a[1] = 1;
    }
    let ovf = |n: usize| FormsError::Overflow { n: n as u64 };
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut m = n;
        let mut pe = 1usize;
        while m % p == 0 {
            m /= p;
            pe *= p;
        }
        if m > 1 {
            a[n] = a[pe].checked_mul(a[m]).ok_or_else(|| ovf(n))?;
            continue;
        }
        let ap = *prime_values.get(&(p as u64)).ok_or(FormsError::MissingPrime(p as u64))?;
        if pe == p {
            a[n] = ap;
            continue;
        }
        let prev = a[pe / p];
        let prev2 = a[pe / p / p];
        let first = ap.checked_mul(prev).ok_or_else(|| ovf(n))?;
        a[n] = if level.is_multiple_of(p as u64) {
            first
        } else {
            let pk = (p as i128).checked_pow(weight - 1).ok_or_else(|| ovf(n))?;
            let second = pk.checked_mul(prev2).ok_or_else(|| ovf(n))?;
            first.checked_sub(second).ok_or_else(|| ovf(n))?
        };
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_basics() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let d = divisor_counts(12);
        assert_eq!(&d[1..], &[1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]);
    }

    #[test]
    fn missing_prime_is_named() {
        let mut pv = BTreeMap::new();
        pv.insert(2u64, -24i128);
        assert_eq!(extend_integer(&pv, 1, 12, 10), Err(FormsError::MissingPrime(3)));
    }
}
