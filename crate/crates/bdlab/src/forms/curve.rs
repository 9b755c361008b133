//! Traces of Frobenius for `y^2 + y = x^3 - x^2 - 10x - 20` (conductor 11).

use super::FormsError;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn rhs(x: i64, p: i64) -> i64 {
    (((x * x % p) * x - x * x - 10 * x - 20) % p + 2 * p * p) % p
}

/// Number of projective points over `F_p`, by direct enumeration of all
/// `(x, y)` plus the point at infinity. `O(p^2)`; used as an oracle.
pub fn count_points_brute(p: u64) -> Result<u64, FormsError> {
    if !is_prime(p) {
        return Err(FormsError::NotPrime(p));
    }
    let p = p as i64;
    let mut count = 1u64;
    for x in 0..p {
        let r = rhs(x, p);
        for y in 0..p {
            if (y * y + y) % p == r {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `a_p = p + 1 - #E(F_p)`. For odd `p` completing the square turns the
/// affine count into `p + sum_x chi(4 g(x) + 1)`, evaluated with a table of
/// squares. `p = 11` is the bad fiber with `a_11 = 1`.
pub fn trace_of_frobenius(p: u64) -> Result<i64, FormsError> {
    if !is_prime(p) {
        return Err(FormsError::NotPrime(p));
    }
    if p == 11 {
        return Ok(1);
    }
    if p == 2 {
        return Ok(3 - count_points_brute(2)? as i64);
    }
    let pu = p as usize;
    let mut is_square = vec![false; pu];
    // (y + 1)^2 = y^2 + 2y + 1, kept reduced without division
    let (mut sq, mut step) = (0usize, 1usize);
    for _ in 0..=pu / 2 {
        is_square[sq] = true;
        sq += step;
        if sq >= pu {
            sq -= pu;
        }
        step += 2;
        if step >= pu {
            step -= pu;
        }
    }
    // 4 g(x) + 1 = 4x^3 - 4x^2 - 40x - 79 stepped by its forward differences
    let red = |v: i64| v.rem_euclid(p as i64) as usize;
    let (mut d0, mut d1, mut d2, d3) = (red(-79), red(-40), red(16), red(24));
    let add = |a: &mut usize, b: usize| {
        *a += b;
        if *a >= pu {
            *a -= pu;
        }
    };
    let mut sum: i64 = 0;
    for _ in 0..pu {
        if d0 != 0 {
            sum += if is_square[d0] { 1 } else { -1 };
        }
        add(&mut d0, d1);
        add(&mut d1, d2);
        add(&mut d2, d3);
    }
    Ok(-sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(trace_of_frobenius(2).unwrap(), -2);
        assert_eq!(trace_of_frobenius(3).unwrap(), -1);
        assert_eq!(trace_of_frobenius(5).unwrap(), 1);
        assert_eq!(trace_of_frobenius(7).unwrap(), -2);
        assert_eq!(trace_of_frobenius(11).unwrap(), 1);
    }

    #[test]
    fn character_sum_matches_enumeration() {
        for p in [3u64, 5, 7, 13, 17, 19, 23, 29, 31, 37, 97] {
            let brute = p as i64 + 1 - count_points_brute(p).unwrap() as i64;
            assert_eq!(trace_of_frobenius(p).unwrap(), brute, "p={p}");
        }
    }

    #[test]
    fn composite_rejected() {
        assert_eq!(trace_of_frobenius(15), Err(FormsError::NotPrime(15)));
    }
}
