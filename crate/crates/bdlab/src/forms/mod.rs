//! Built-in holomorphic newforms and their normalized Hecke eigenvalues.
//!
//! Two forms are provided: the discriminant form of level 1 and weight 12,
//! and the weight-2 form of level 11 attached to the elliptic curve
//! `y^2 + y = x^3 - x^2 - 10x - 20`. Both have trivial nebentypus, so their
//! coefficients are real.

pub mod curve;
pub mod hecke;
pub mod qseries;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use hecke::{divisor_counts, primes_up_to};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FormsError {
    #[error("integer overflow while computing coefficient n = {n}; switch to big-integer arithmetic for this range")]
    Overflow { n: u64 },
    #[error("no a_p supplied for prime p = {0}")]
    MissingPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("n_max must be at least 1")]
    EmptyTable,
    #[error("|eta| = {0} is not 1 within 1e-12")]
    EtaNotUnit(f64),
    #[error("unknown form label {0:?}; expected \"delta\" or \"11a\"")]
    UnknownLabel(String),
}

/// `i^k` for any integer `k`.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewformDescriptor {
    pub label: String,
    /// Level `M`.
    pub level: u64,
    /// Weight `k`.
    pub weight: u32,
    pub nebentypus_trivial: bool,
    eta: Option<Complex64>,
}

impl NewformDescriptor {
    pub fn new(label: &str, level: u64, weight: u32) -> Self {
        NewformDescriptor { label: label.to_string(), level, weight, nebentypus_trivial: true, eta: None }
    }

    /// The Atkin–Lehner pseudo-eigenvalue, once calibrated.
    pub fn eta(&self) -> Option<Complex64> {
        self.eta
    }

    /// Root number `eps = i^k eta`.
    pub fn eps(&self) -> Option<Complex64> {
        self.eta.map(|e| i_pow(self.weight as i64) * e)
    }

    pub fn with_eta(mut self, eta: Complex64) -> Result<Self, FormsError> {
        if (eta.norm() - 1.0).abs() > 1e-12 {
            return Err(FormsError::EtaNotUnit(eta.norm()));
        }
        self.eta = Some(eta);
        Ok(self)
    }

    /// `xi(-1) = (-1)^k` for trivial nebentypus.
    pub fn xi_minus_one(&self) -> f64 {
        if self.weight.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Normalized coefficients `lambda(1..=n_max)`; immutable and cheap to clone.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    descriptor: NewformDescriptor,
    lambda: Arc<Vec<f64>>,
    integers: Option<Arc<Vec<i128>>>,
}

impl PartialEq for CoefficientTable {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
            && self.lambda.len() == other.lambda.len()
            && self.lambda.iter().zip(other.lambda.iter()).all(|(a, b)| a.to_bits() == b.to_bits())
            && self.integers == other.integers
    }
}

impl CoefficientTable {
    /// From integer coefficients `a(n)`, index 0 unused; normalizes by
    /// `n^{(k-1)/2}`.
    pub fn from_integers(descriptor: NewformDescriptor, a: Vec<i128>) -> Self {
        let half = (descriptor.weight as f64 - 1.0) / 2.0;
        let lambda: Vec<f64> = a
            .iter()
            .enumerate()
            .map(|(n, &v)| if n == 0 { 0.0 } else { v as f64 / (n as f64).powf(half) })
            .collect();
        CoefficientTable { descriptor, lambda: Arc::new(lambda), integers: Some(Arc::new(a)) }
    }

    /// From normalized values, index 0 unused.
    pub fn from_normalized(descriptor: NewformDescriptor, lambda: Vec<f64>) -> Self {
        CoefficientTable { descriptor, lambda: Arc::new(lambda), integers: None }
    }

    pub fn descriptor(&self) -> &NewformDescriptor {
        &self.descriptor
    }

    /// Same coefficients with a replaced descriptor (after calibration).
    pub fn with_descriptor(&self, descriptor: NewformDescriptor) -> Self {
        CoefficientTable { descriptor, ..self.clone() }
    }

    pub fn n_max(&self) -> usize {
        self.lambda.len().saturating_sub(1)
    }

    /// `lambda(n)`; panics outside `1..=n_max`.
    #[inline]
    pub fn lambda(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.n_max(), "coefficient index {n} outside 1..={}", self.n_max());
        self.lambda[n]
    }

    /// All values with index 0 holding 0.
    pub fn values(&self) -> &[f64] {
        &self.lambda
    }

    pub fn integers(&self) -> Option<&[i128]> {
        self.integers.as_deref().map(|v| v.as_slice())
    }
}

/// Built-in form selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormLabel {
    Delta,
    Level11,
}

impl FromStr for FormLabel {
    type Err = FormsError;
    fn from_str(s: &str) -> Result<Self, FormsError> {
        match s.to_ascii_lowercase().as_str() {
            "delta" => Ok(FormLabel::Delta),
            "11a" => Ok(FormLabel::Level11),
            _ => Err(FormsError::UnknownLabel(s.to_string())),
        }
    }
}

impl fmt::Display for FormLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormLabel::Delta => "delta",
            FormLabel::Level11 => "11a",
        })
    }
}

impl FormLabel {
    pub fn build(self, n_max: usize) -> Result<CoefficientTable, FormsError> {
        match self {
            FormLabel::Delta => coefficients_delta(n_max),
            FormLabel::Level11 => coefficients_11a(n_max),
        }
    }

    pub fn descriptor(self) -> NewformDescriptor {
        match self {
            FormLabel::Delta => NewformDescriptor::new("delta", 1, 12),
            FormLabel::Level11 => NewformDescriptor::new("11a", 11, 2),
        }
    }
}

/// `lambda(n) = tau(n) / n^{11/2}` with `tau` from the eta-product expansion.
pub fn coefficients_delta(n_max: usize) -> Result<CoefficientTable, FormsError> {
    if n_max == 0 {
        return Err(FormsError::EmptyTable);
    }
    let tau = qseries::ramanujan_tau(n_max)?;
    let mut a = Vec::with_capacity(n_max + 1);
    a.push(0);
    a.extend(tau);
    Ok(CoefficientTable::from_integers(FormLabel::Delta.descriptor(), a))
}

/// Level-11 weight-2 form from point counts, extended by the Hecke relations.
pub fn coefficients_11a(n_max: usize) -> Result<CoefficientTable, FormsError> {
    if n_max == 0 {
        return Err(FormsError::EmptyTable);
    }
    let mut pv = BTreeMap::new();
    for p in primes_up_to(n_max) {
        pv.insert(p, curve::trace_of_frobenius(p)? as i128);
    }
    let t = hecke_extend(&pv, 11, 2, n_max)?;
    Ok(t.with_descriptor(FormLabel::Level11.descriptor()))
}

/// Extends `a_p` for all primes `p <= n_max` to a full table.
pub fn hecke_extend(
    prime_values: &BTreeMap<u64, i128>,
    level: u64,
    weight: u32,
    n_max: usize,
) -> Result<CoefficientTable, FormsError> {
    if n_max == 0 {
        return Err(FormsError::EmptyTable);
    }
    let a = hecke::extend_integer(prime_values, level, weight, n_max)?;
    let label = format!("M{level}k{weight}");
    Ok(CoefficientTable::from_integers(NewformDescriptor::new(&label, level, weight), a))
}

#[derive(Clone, Debug, Serialize)]
pub struct RamanujanReport {
    /// `max |lambda(n)| / d(n)`.
    pub max_ratio: f64,
    pub argmax: usize,
    /// `(N, sum_{n<=N} lambda(n)^2 / N)` for `N = 2^j <= n_max`.
    pub mean_square: Vec<(usize, f64)>,
    pub pass: bool,
}

pub fn ramanujan_report(table: &CoefficientTable) -> RamanujanReport {
    let n_max = table.n_max();
    let d = divisor_counts(n_max);
    let mut max_ratio = 0.0;
    let mut argmax = 1;
    let mut acc = 0.0;
    let mut mean_square = Vec::new();
    let mut next = 1usize;
    for n in 1..=n_max {
        let l = table.lambda(n);
        let r = l.abs() / d[n] as f64;
        if r > max_ratio {
            max_ratio = r;
            argmax = n;
        }
        acc += l * l;
        if n == next {
            mean_square.push((n, acc / n as f64));
            next *= 2;
        }
    }
    let band = mean_square.iter().all(|&(_, m)| (0.01..=100.0).contains(&m));
    RamanujanReport { max_ratio, argmax, mean_square, pass: max_ratio <= 1.0 + 1e-12 && band }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_basics() {
        let t = coefficients_delta(20).unwrap();
        let a = t.integers().unwrap();
        assert_eq!(a[1], 1);
        assert_eq!(a[2], -24);
        assert_eq!(a[6], a[2] * a[3]);
        assert_eq!(t.lambda(1), 1.0);
        assert_eq!(a[4], a[2] * a[2] - 2i128.pow(11));
    }

    #[test]
    fn level11_ramified_prime() {
        let t = coefficients_11a(200).unwrap();
        let a = t.integers().unwrap();
        assert_eq!(a[11], 1);
        assert_eq!(a[121], a[11] * a[11]);
        assert_eq!(a[2], -2);
        assert_eq!(a[3], -1);
        assert!((t.lambda(2) - (-2.0 / 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn eps_follows_eta() {
        let d = NewformDescriptor::new("x", 11, 2).with_eta(Complex64::new(-1.0, 0.0)).unwrap();
        assert_eq!(d.eps(), Some(Complex64::new(1.0, 0.0)));
        assert!(NewformDescriptor::new("x", 1, 12).with_eta(Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn labels_parse() {
        assert_eq!("delta".parse::<FormLabel>().unwrap(), FormLabel::Delta);
        assert_eq!("11A".parse::<FormLabel>().unwrap(), FormLabel::Level11);
        assert!("37a".parse::<FormLabel>().is_err());
    }
}
