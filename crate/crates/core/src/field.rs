//! Exact scalar fields.
//!
//! Everything in this crate is generic over a [`Field`] context object. The
//! context carries whatever runtime data the arithmetic needs (the modulus of
//! a prime field), and elements are plain values. Two implementations are
//! provided: [`PrimeField`] for 31-bit primes, which is the workhorse, and
//! [`Rationals`] for small exact cross-checks.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// The default modulus, 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit in 31 bits")]
    ModulusTooLarge(u64),
    #[error("cannot parse field element from {0:?}")]
    Parse(String),
    #[error("no prime below {bound} congruent to 1 modulo {modulus}")]
    NoSuitablePrime { bound: u64, modulus: u64 },
}

/// Which kind of exact field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    PrimeField,
    Rationals,
}

/// Reproducibility record embedded in every report: the field plus the seed
/// that drove all random choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub modality: Modality,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime: Option<u64>,
    pub seed: u64,
}

impl FieldConfig {
    pub fn prime(p: u64, seed: u64) -> Self {
        FieldConfig {
            modality: Modality::PrimeField,
            prime: Some(p),
            seed,
        }
    }

    pub fn rationals(seed: u64) -> Self {
        FieldConfig {
            modality: Modality::Rationals,
            prime: None,
            seed,
        }
    }

    /// A prime field serves an instance only if `p > 2(2n+2k)`.
    pub fn serves(&self, n: usize, k: usize) -> bool {
        match self.prime {
            Some(p) => p > 2 * (2 * n + 2 * k) as u64,
            None => true,
        }
    }
}

/// An exact field, used as a context object for its elements.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Uniform element (prime field) or a small random integer (rationals).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Zero for the rationals.
    fn characteristic(&self) -> u64;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;

    /// JSON encoding of a single element.
    fn to_json(&self, a: &Self::Elem) -> Value {
        Value::String(self.format(a))
    }

    fn from_json(&self, v: &Value) -> Result<Self::Elem, FieldError> {
        match v {
            Value::String(s) => self.parse(s),
            Value::Number(num) => self.parse(&num.to_string()),
            other => Err(FieldError::Parse(other.to_string())),
        }
    }

    fn config(&self, seed: u64) -> FieldConfig;

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn from_usize(&self, v: usize) -> Self::Elem {
        self.from_i64(v as i64)
    }

    /// `dst[i] -= c * src[i]` for every index. The elimination kernels spend
    /// nearly all their time here, so implementations may override it.
    fn sub_scaled(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = self.sub(d, &self.mul(c, s));
        }
    }

    /// `dst[i] *= c`.
    fn scale_in_place(&self, dst: &mut [Self::Elem], c: &Self::Elem) {
        for d in dst.iter_mut() {
            *d = self.mul(d, c);
        }
    }
}

/// The field Z/pZ for a prime p below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The largest prime below 2^31 with `order | p - 1`, so that the field
    /// contains a primitive `order`-th root of unity.
    pub fn with_roots_of_unity(order: u64) -> Result<Self, FieldError> {
        let p = largest_prime_below(1 << 31, order.max(1))?;
        Ok(PrimeField { p })
    }

    /// A primitive `order`-th root of unity, if `order | p - 1`.
    pub fn primitive_root_of_unity(&self, order: u64) -> Option<u64> {
        if order == 0 || !(self.p - 1).is_multiple_of(order) {
            return None;
        }
        if order == 1 {
            return Some(1);
        }
        let factors = prime_factors(order);
        let cofactor = (self.p - 1) / order;
        (2..self.p).find_map(|g| {
            let rho = self.pow(&g, cofactor);
            factors
                .iter()
                .all(|q| self.pow(&rho, order / q) != 1)
                .then_some(rho)
        })
    }

    #[inline]
    fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.from_i64(t0))
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let s = s.trim();
        let v: i64 = s.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        Ok(self.from_i64(v))
    }

    fn to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }

    fn config(&self, seed: u64) -> FieldConfig {
        FieldConfig::prime(self.p, seed)
    }

    fn sub_scaled(&self, dst: &mut [u64], c: &u64, src: &[u64]) {
        if *c == 0 {
            return;
        }
        // dst + (p - c) * src stays below 2^63 for p < 2^31.
        let nc = self.p - c;
        let p = self.p;
        for (d, s) in dst.iter_mut().zip(src) {
            *d = (*d + nc * s) % p;
        }
    }
}

/// The rational numbers with arbitrary-precision entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-1000..=1000))
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let s = s.trim();
        let err = || FieldError::Parse(s.to_string());
        match s.split_once('/') {
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| err())?;
                let den: BigInt = den.trim().parse().map_err(|_| err())?;
                if den.is_zero() {
                    return Err(err());
                }
                Ok(BigRational::new(num, den))
            }
            None => {
                let num: BigInt = s.parse().map_err(|_| err())?;
                Ok(BigRational::from_integer(num))
            }
        }
    }

    fn config(&self, seed: u64) -> FieldConfig {
        FieldConfig::rationals(seed)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    'outer: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Largest prime `p < bound` with `p ≡ 1 (mod modulus)`.
pub fn largest_prime_below(bound: u64, modulus: u64) -> Result<u64, FieldError> {
    let modulus = modulus.max(1);
    // walk the progression 1 + j*lcm(2, modulus) downward
    let step = if modulus.is_multiple_of(2) { modulus } else { 2 * modulus };
    if bound <= 2 {
        return Err(FieldError::NoSuitablePrime { bound, modulus });
    }
    let mut candidate = ((bound - 2) / step) * step + 1;
    while candidate > 2 {
        if is_prime(candidate) {
            return Ok(candidate);
        }
        candidate -= step;
    }
    if modulus == 1 && bound > 2 {
        return Ok(2);
    }
    Err(FieldError::NoSuitablePrime { bound, modulus })
}

/// `count` distinct primes below 2^31 with `modulus | p - 1`, largest first.
pub fn independent_primes(count: usize, modulus: u64) -> Result<Vec<u64>, FieldError> {
    let mut out = Vec::with_capacity(count);
    let mut bound = 1u64 << 31;
    for _ in 0..count {
        let p = largest_prime_below(bound, modulus)?;
        out.push(p);
        bound = p;
    }
    Ok(out)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime(DEFAULT_PRIME));
        assert!(!is_prime(DEFAULT_PRIME - 2));
        assert!(PrimeField::new(15).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        for a in [1u64, 2, 3, 12345, DEFAULT_PRIME - 1] {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for order in [1u64, 2, 3, 4, 5, 6, 12] {
            let f = PrimeField::with_roots_of_unity(order).unwrap();
            assert_eq!((f.modulus() - 1) % order, 0);
            let rho = f.primitive_root_of_unity(order).unwrap();
            assert_eq!(f.pow(&rho, order), 1);
            for d in 1..order {
                if order % d == 0 {
                    assert_ne!(f.pow(&rho, d), 1);
                }
            }
        }
    }

    #[test]
    fn independent_primes_are_distinct() {
        let ps = independent_primes(3, 1).unwrap();
        assert_eq!(ps[0], DEFAULT_PRIME);
        assert!(ps[0] > ps[1] && ps[1] > ps[2]);
        assert!(ps.iter().all(|&p| is_prime(p)));
    }

    #[test]
    fn rational_parse_and_format() {
        let q = Rationals;
        let x = q.parse("-6/4").unwrap();
        assert_eq!(q.format(&x), "-3/2");
        assert_eq!(q.format(&q.parse("7").unwrap()), "7");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn prime_sub_scaled_matches_generic() {
        let f = PrimeField::new(101).unwrap();
        let mut a = vec![5u64, 100, 0, 37];
        let b = vec![3u64, 7, 99, 1];
        let mut expected = a.clone();
        for (d, s) in expected.iter_mut().zip(&b) {
            *d = f.sub(d, &f.mul(&42, s));
        }
        f.sub_scaled(&mut a, &42, &b);
        assert_eq!(a, expected);
    }
}
