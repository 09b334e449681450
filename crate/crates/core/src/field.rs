//! Exact arithmetic in GF(p^k).
//!
//! Elements are identified with their canonical index `sum c_i p^i`, where
//! `c_0..c_{k-1}` are the residues of the coefficient vector (low degree first).
//! Ascending index order is the lexicographic order of coefficient vectors read
//! from the high-degree end, with zero first.
//!
//! The coefficient-vector operations on [`FieldSpec`] are the semantic
//! definition. [`GaloisField`] precomputes addition and multiplication tables
//! (multiplication through discrete log/exp tables over a primitive element)
//! for use in the geometry code.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::primes;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1024;
/// Largest degree accepted by [`find_irreducible`].
pub const MAX_IRREDUCIBLE_DEGREE: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} outside 1..={MAX_IRREDUCIBLE_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("field order {0} is not a supported prime power (q <= {MAX_ORDER})")]
    UnsupportedOrder(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {0} over GF({1})")]
    BadModulus(u32, u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element index {index} out of range for GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },
}

// ---------------------------------------------------------------------------
// Polynomials over GF(p), coefficient vectors low degree first.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn poly_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    trim(&mut a);
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while a.len() > df {
        let da = a.len() - 1;
        let c = (a[da] as u128 * lead_inv as u128 % p as u128) as u64;
        if c != 0 {
            for (i, &fi) in f.iter().enumerate() {
                let idx = da - df + i;
                let sub = (c as u128 * fi as u128 % p as u128) as u64;
                a[idx] = (a[idx] + p - sub) % p;
            }
        }
        trim(&mut a);
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + ai as u128 * bj as u128) % p as u128) as u64;
        }
    }
    trim(&mut out);
    out
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    poly_rem(poly_mul(a, b, p), f, p)
}

fn poly_powmod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(vec![1], f, p);
    let mut b = poly_rem(base.to_vec(), f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^j) mod f`.
fn frobenius_power(f: &[u64], p: u64, j: u32) -> Vec<u64> {
    let mut h = poly_rem(vec![0, 1], f, p);
    for _ in 0..j {
        h = poly_powmod(&h, p, f, p);
    }
    h
}

/// Rabin's irreducibility test for a monic `f` of degree `k >= 1` over GF(p).
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = (f.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    if poly_sub(&frobenius_power(f, p, k), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for r in primes::prime_factors(k as u64) {
        let h = poly_sub(&frobenius_power(f, p, k / r as u32), &x, p);
        if poly_gcd(&h, f, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `k` over GF(p).
///
/// Coefficients are returned low degree first (length `k + 1`, last entry 1);
/// candidates are compared from the high-degree end.
pub fn find_irreducible(p: u64, k: u32) -> Result<Vec<u32>, FieldError> {
    if !primes::is_prime(p) || p > u32::MAX as u64 {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 || k > MAX_IRREDUCIBLE_DEGREE {
        return Err(FieldError::DegreeOutOfRange(k));
    }
    let mut low = vec![0u64; k as usize];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(f.into_iter().map(|c| c as u32).collect());
        }
        // increment the base-p counter, least significant digit first
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            if i == low.len() {
                unreachable!("every degree has an irreducible polynomial");
            }
        }
    }
}

/// Multiplication in GF(2^k) on the packed bit representation, where bit `i`
/// holds the coefficient of `x^i` and `modulus` holds all `k + 1` bits.
pub fn gf2_packed_mul(a: u32, b: u32, modulus: u32, k: u32) -> u32 {
    let mut prod: u64 = 0;
    for i in 0..k {
        if (b >> i) & 1 == 1 {
            prod ^= (a as u64) << i;
        }
    }
    for bit in (k..2 * k).rev() {
        if (prod >> bit) & 1 == 1 {
            prod ^= (modulus as u64) << (bit - k);
        }
    }
    prod as u32
}

// ---------------------------------------------------------------------------

/// Parameters of GF(p^k): characteristic, degree and the reduction modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    q: u32,
}

impl FieldSpec {
    /// GF(p^k) reduced by the least irreducible polynomial of degree `k`.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if !primes::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = checked_order(p, k)?;
        let modulus = find_irreducible(p, k)?;
        Ok(FieldSpec { p: p as u32, k, modulus, q })
    }

    /// The field of order `q`, which must be a prime power `<= 1024`.
    pub fn for_order(q: u64) -> Result<Self, FieldError> {
        let (p, k) = primes::prime_power(q).ok_or(FieldError::UnsupportedOrder(q))?;
        Self::new(p, k)
    }

    /// Field with an explicit modulus (low degree first, monic).
    pub fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !primes::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(FieldError::DegreeOutOfRange(0));
        }
        let k = (modulus.len() - 1) as u32;
        let q = checked_order(p, k)?;
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if f.iter().any(|&c| c >= p) || f[k as usize] != 1 || !is_irreducible(&f, p) {
            return Err(FieldError::BadModulus(k, p as u32));
        }
        Ok(FieldSpec { p: p as u32, k, modulus, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficient vector (low degree first, length `k`) of the element with
    /// canonical index `index`.
    pub fn coeffs(&self, mut index: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let c = index % self.p;
                index /= self.p;
                c
            })
            .collect()
    }

    pub fn index_of(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// Reference addition on coefficient vectors.
    pub fn coeff_add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u32> = x.iter().zip(&y).map(|(&s, &t)| (s + t) % self.p).collect();
        self.index_of(&sum)
    }

    /// Reference multiplication: polynomial product reduced by the modulus.
    pub fn coeff_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let x: Vec<u64> = self.coeffs(a).into_iter().map(u64::from).collect();
        let y: Vec<u64> = self.coeffs(b).into_iter().map(u64::from).collect();
        let f: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let mut r = poly_mulmod(&x, &y, &f, p);
        r.resize(self.k as usize, 0);
        let r: Vec<u32> = r.into_iter().map(|c| c as u32).collect();
        self.index_of(&r)
    }
}

fn checked_order(p: u64, k: u32) -> Result<u32, FieldError> {
    if k == 0 {
        return Err(FieldError::DegreeOutOfRange(k));
    }
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p);
        if q > MAX_ORDER {
            return Err(FieldError::UnsupportedOrder(q));
        }
    }
    Ok(q as u32)
}

/// Table-driven GF(q) with elements addressed by canonical index.
#[derive(Debug, Clone)]
pub struct GaloisField {
    spec: FieldSpec,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    log: Vec<u16>,
    exp: Vec<u16>,
}

impl GaloisField {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q as usize;
        let generator = (1..q as u32)
            .find(|&g| multiplicative_order(&spec, g) == q as u32 - 1)
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![0u16; q];
        let mut x = 1u32;
        for e in 0..q - 1 {
            exp.push(x as u16);
            log[x as usize] = e as u16;
            x = spec.coeff_mul(x, generator);
        }

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = if spec.p == 2 {
                    (a ^ b) as u16
                } else if spec.k == 1 {
                    ((a + b) % q) as u16
                } else {
                    spec.coeff_add(a as u32, b as u32) as u16
                };
                if a != 0 && b != 0 {
                    let e = (log[a] as usize + log[b] as usize) % (q - 1);
                    mul[a * q + b] = exp[e];
                }
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    exp[(q - 1 - log[a] as usize) % (q - 1)]
                }
            })
            .collect();
        GaloisField { spec, add, mul, neg, inv, log, exp }
    }

    pub fn for_order(q: u64) -> Result<Self, FieldError> {
        Ok(Self::new(FieldSpec::for_order(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u32 {
        self.spec.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.spec.q + b) as usize] as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.spec.q + b) as usize] as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            Err(FieldError::ZeroInverse)
        } else {
            Ok(self.inv[a as usize] as u32)
        }
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.spec.q - 1) as u64;
        let idx = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[idx as usize] as u32
    }

    pub fn element(&self, index: u32) -> Result<FieldElement<'_>, FieldError> {
        if index >= self.spec.q {
            return Err(FieldError::ElementOutOfRange { index, q: self.spec.q });
        }
        Ok(FieldElement { field: self, index })
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement { field: self, index: 0 }
    }

    pub fn one(&self) -> FieldElement<'_> {
        FieldElement { field: self, index: 1 }
    }

    /// All `q` elements in canonical order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> + '_ {
        (0..self.spec.q).map(move |index| FieldElement { field: self, index })
    }
}

fn multiplicative_order(spec: &FieldSpec, g: u32) -> u32 {
    let mut x = g;
    let mut order = 1;
    while x != 1 {
        x = spec.coeff_mul(x, g);
        order += 1;
    }
    order
}

/// All elements of the field described by `spec`, in canonical order.
pub fn enumerate_field(spec: &FieldSpec) -> Vec<Vec<u32>> {
    (0..spec.q).map(|i| spec.coeffs(i)).collect()
}

/// An element bound to its field.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f GaloisField,
    index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Pow(u64),
}

impl<'f> FieldElement<'f> {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn field(&self) -> &'f GaloisField {
        self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.spec.coeffs(self.index)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if std::ptr::eq(self.field, other.field) || self.field.spec == other.field.spec {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, index: u32) -> Self {
        FieldElement { field: self.field, index }
    }

    /// Applies `op`; binary operations take their second operand from `rhs`.
    pub fn apply(&self, op: FieldOp, rhs: Option<&Self>) -> Result<Self, FieldError> {
        let f = self.field;
        let rhs_index = |rhs: Option<&Self>| -> Result<u32, FieldError> {
            let r = rhs.ok_or(FieldError::FieldMismatch)?;
            self.same_field(r)?;
            Ok(r.index)
        };
        let index = match op {
            FieldOp::Add => f.add(self.index, rhs_index(rhs)?),
            FieldOp::Sub => f.sub(self.index, rhs_index(rhs)?),
            FieldOp::Mul => f.mul(self.index, rhs_index(rhs)?),
            FieldOp::Neg => f.neg(self.index),
            FieldOp::Inv => f.inv(self.index)?,
            FieldOp::Pow(e) => f.pow(self.index, e),
        };
        Ok(self.with(index))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.apply(FieldOp::Add, Some(rhs))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.apply(FieldOp::Mul, Some(rhs))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.apply(FieldOp::Inv, None)
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.field.pow(self.index, e))
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other).is_ok() && self.index == other.index
    }
}

impl Eq for FieldElement<'_> {}

impl<'f> Add for FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn add(self, rhs: Self) -> Self::Output {
        self.try_add(&rhs).expect("field addition across different fields")
    }
}

impl<'f> Sub for FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.apply(FieldOp::Sub, Some(&rhs))
            .expect("field subtraction across different fields")
    }
}

impl<'f> Mul for FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.try_mul(&rhs).expect("field multiplication across different fields")
    }
}

impl<'f> Neg for FieldElement<'f> {
    type Output = FieldElement<'f>;
    fn neg(self) -> Self::Output {
        self.with(self.field.neg(self.index))
    }
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{}]", self.field.q(), self)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        let mut terms = Vec::new();
        for (deg, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && deg > 0 { String::new() } else { c.to_string() };
            terms.push(match deg {
                0 => c.to_string(),
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{deg}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Irreducibility by trial division against every monic polynomial of
    /// degree 1..=k/2.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        for d in 1..=k / 2 {
            let count = p.pow(d as u32);
            for low in 0..count {
                let mut g: Vec<u64> = (0..d).map(|i| (low / p.pow(i as u32)) % p).collect();
                g.push(1);
                if poly_rem(f.to_vec(), &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(find_irreducible(2, 1).unwrap(), vec![0, 1]);
        assert_eq!(find_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn least_irreducible_matches_exhaustive_scan() {
        for (p, k) in [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (2, 8), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4)] {
            // first monic polynomial in high-to-low lexicographic order that
            // survives trial division
            let mut expected = None;
            for low in 0..p.pow(k) {
                let mut f: Vec<u64> = (0..k).map(|i| (low / p.pow(i)) % p).collect();
                f.push(1);
                if irreducible_by_trial_division(&f, p) {
                    expected = Some(f.iter().map(|&c| c as u32).collect::<Vec<_>>());
                    break;
                }
            }
            assert_eq!(find_irreducible(p, k).unwrap(), expected.unwrap(), "p={p} k={k}");
        }
    }

    #[test]
    fn irreducible_divides_field_polynomial() {
        for (p, k) in [(2u64, 10u32), (2, 13), (2, 20), (3, 7), (5, 5), (1009, 3)] {
            let f: Vec<u64> = find_irreducible(p, k).unwrap().into_iter().map(u64::from).collect();
            assert_eq!(frobenius_power(&f, p, k), vec![0, 1], "p={p} k={k}");
        }
    }

    #[test]
    fn find_irreducible_rejects_bad_input() {
        assert_eq!(find_irreducible(4, 2), Err(FieldError::NotPrime(4)));
        assert_eq!(find_irreducible(2, 0), Err(FieldError::DegreeOutOfRange(0)));
        assert_eq!(find_irreducible(2, 21), Err(FieldError::DegreeOutOfRange(21)));
    }

    #[test]
    fn unsupported_orders_rejected() {
        assert!(matches!(FieldSpec::for_order(2048), Err(FieldError::UnsupportedOrder(_))));
        assert!(matches!(FieldSpec::for_order(6), Err(FieldError::UnsupportedOrder(6))));
        assert!(matches!(FieldSpec::new(4, 1), Err(FieldError::NotPrime(4))));
        assert!(matches!(
            FieldSpec::with_modulus(2, vec![1, 0, 1]),
            Err(FieldError::BadModulus(2, 2))
        ));
    }

    #[test]
    fn small_examples() {
        let gf5 = GaloisField::for_order(5).unwrap();
        assert_eq!(gf5.mul(3, 4), 2);
        let gf4 = GaloisField::for_order(4).unwrap();
        // x = index 2, x + 1 = index 3
        assert_eq!(gf4.mul(2, 2), 3);
        let x = gf4.element(2).unwrap();
        assert_eq!((x * x).to_string(), "x+1");
    }

    #[test]
    fn gf4_multiplication_table_by_hand_reduction() {
        // (a1 x + a0)(b1 x + b0) = a1 b1 x^2 + (a1 b0 + a0 b1) x + a0 b0, x^2 = x + 1
        let gf4 = GaloisField::for_order(4).unwrap();
        for a in 0..4u32 {
            for b in 0..4u32 {
                let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
                let hi = a1 & b1;
                let mid = (a1 & b0) ^ (a0 & b1) ^ hi;
                let lo = (a0 & b0) ^ hi;
                assert_eq!(gf4.mul(a, b), lo | (mid << 1), "{a}*{b}");
            }
        }
    }

    #[test]
    fn enumeration_order() {
        let names = |q: u64| -> Vec<String> {
            let f = GaloisField::for_order(q).unwrap();
            f.elements().map(|e| e.to_string()).collect()
        };
        assert_eq!(names(2), ["0", "1"]);
        assert_eq!(names(3), ["0", "1", "2"]);
        assert_eq!(names(4), ["0", "1", "x", "x+1"]);
        let spec = FieldSpec::for_order(9).unwrap();
        let all = enumerate_field(&spec);
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[3], vec![0, 1]);
    }

    #[test]
    fn tables_agree_with_coefficient_arithmetic() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 125] {
            let f = GaloisField::for_order(q).unwrap();
            let spec = f.spec().clone();
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    assert_eq!(f.mul(a, b), spec.coeff_mul(a, b), "q={q} {a}*{b}");
                    assert_eq!(f.add(a, b), spec.coeff_add(a, b), "q={q} {a}+{b}");
                }
            }
        }
    }

    #[test]
    fn packed_gf2k_agrees_exhaustively() {
        for k in 1..=8u32 {
            let f = GaloisField::new(FieldSpec::new(2, k).unwrap());
            // packed modulus includes the leading x^k bit
            let modulus = f.spec().index_of(f.spec().modulus());
            let q = 1u32 << k;
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(gf2_packed_mul(a, b, modulus, k), f.spec().coeff_mul(a, b));
                }
            }
        }
    }

    #[test]
    fn inverses_exhaustive() {
        for q in [2u64, 3, 4, 5, 8, 9, 11, 16, 27, 32, 64, 121, 128, 243, 256] {
            let f = GaloisField::for_order(q).unwrap();
            assert_eq!(f.inv(0), Err(FieldError::ZeroInverse));
            for a in 1..q as u32 {
                let ai = f.inv(a).unwrap();
                assert_eq!(f.mul(a, ai), 1);
                assert_eq!(f.mul(ai, a), 1);
                assert_eq!(f.pow(a, q - 1), 1, "Lagrange, q={q}");
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn cross_field_operands_rejected() {
        let f4 = GaloisField::for_order(4).unwrap();
        let f5 = GaloisField::for_order(5).unwrap();
        let a = f4.element(1).unwrap();
        let b = f5.element(1).unwrap();
        assert_eq!(a.try_add(&b).unwrap_err(), FieldError::FieldMismatch);
        assert_eq!(a.try_mul(&b).unwrap_err(), FieldError::FieldMismatch);
        assert_eq!(f4.zero().inv().unwrap_err(), FieldError::ZeroInverse);
        assert!(f4.element(4).is_err());
        // an independently built copy of the same field is compatible
        let g4 = GaloisField::for_order(4).unwrap();
        assert!(a.try_add(&g4.element(3).unwrap()).is_ok());
    }

    fn supported_orders() -> Vec<u64> {
        (2..=1024).filter(|&q| primes::prime_power(q).is_some()).collect()
    }

    #[test]
    fn every_supported_order_constructs() {
        for q in supported_orders() {
            let spec = FieldSpec::for_order(q).unwrap();
            assert_eq!(spec.q() as u64, q);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms(qi in 0usize..172, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let orders = supported_orders();
            let q = orders[qi % orders.len()];
            let f = GaloisField::for_order(q).unwrap();
            let (a, b, c) = (a % q as u32, b % q as u32, c % q as u32);
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(a, b), f.spec().coeff_mul(a, b));
        }
    }
}
