//! Exact arithmetic in F_p and in the quadratic extension F_p(√D), plus the
//! small number-theoretic searches (Legendre symbol, non-squares, primitive
//! elements, square roots of -1) that fix the canonical generation choices.
//!
//! Everything here is deterministic: "smallest" or "first in scan order" is
//! part of the contract, so two runs — or two machines — pick the same D, α
//! and (s, t) and therefore build identical dictionaries.

use crate::Error;
use alloc::vec::Vec;

/// A residue mod p. Arithmetic stays in [0, p-1]; p is an odd prime > 3 and
/// small enough that products fit in u64 via u128 intermediates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpElem {
    value: u64,
    p: u64,
}

impl FpElem {
    pub fn new(value: u64, p: u64) -> Self {
        debug_assert!(p > 3, "modulus must be an odd prime > 3");
        FpElem {
            value: value % p,
            p,
        }
    }

    /// Reduce a possibly-negative integer.
    pub fn from_i64(value: i64, p: u64) -> Self {
        let m = p as i64;
        FpElem::new(value.rem_euclid(m) as u64, p)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut k: u64) -> FpElem {
        let mut base = self;
        let mut acc = FpElem::new(1, self.p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(p-2). Panics on zero: division by zero
    /// is a caller bug, not an input condition.
    pub fn inv(self) -> FpElem {
        assert!(self.value != 0, "inverse of zero mod {}", self.p);
        self.pow(self.p - 2)
    }
}

// mixing moduli is a bug, so the operators insist on agreement
impl core::ops::Add for FpElem {
    type Output = FpElem;
    fn add(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.p, rhs.p);
        FpElem::new(self.value + rhs.value, self.p)
    }
}

impl core::ops::Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.p, rhs.p);
        FpElem::new(self.value + self.p - rhs.value, self.p)
    }
}

impl core::ops::Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.p, rhs.p);
        let prod = (self.value as u128 * rhs.value as u128) % self.p as u128;
        FpElem::new(prod as u64, self.p)
    }
}

impl core::ops::Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        FpElem::new(self.p - self.value, self.p)
    }
}

/// The Legendre symbol (a|p) in {-1, 0, +1}, computed as a^((p-1)/2).
pub fn legendre(a: FpElem) -> i64 {
    if a.is_zero() {
        return 0;
    }
    let r = a.pow((a.p - 1) / 2);
    if r.value == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive non-square mod p — the canonical D.
pub fn find_nonsquare(p: u64) -> FpElem {
    for d in 2..p {
        let e = FpElem::new(d, p);
        if legendre(e) == -1 {
            return e;
        }
    }
    unreachable!("every odd prime has a non-square below it")
}

/// Distinct prime factors by trial division; n stays tiny (at most p^2 - 1).
fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
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

/// Deterministic primality test by trial division; fine at this scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest generator of the multiplicative group mod p, certified by
/// checking a^((p-1)/q) != 1 for every prime q dividing p - 1.
pub fn primitive_root(p: u64) -> FpElem {
    let qs = distinct_prime_factors(p - 1);
    for a in 2..p {
        let e = FpElem::new(a, p);
        if qs.iter().all(|&q| e.pow((p - 1) / q).value != 1) {
            return e;
        }
    }
    unreachable!("the multiplicative group mod a prime is cyclic")
}

/// An element x + √D·y of F_p(√D), D a fixed non-square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp2Elem {
    pub x: FpElem,
    pub y: FpElem,
    pub d: FpElem,
}

impl Fp2Elem {
    pub fn new(x: FpElem, y: FpElem, d: FpElem) -> Self {
        debug_assert_eq!(x.modulus(), y.modulus());
        debug_assert_eq!(x.modulus(), d.modulus());
        Fp2Elem { x, y, d }
    }

    pub fn one(d: FpElem) -> Self {
        let p = d.modulus();
        Fp2Elem::new(FpElem::new(1, p), FpElem::new(0, p), d)
    }

    pub fn is_one(&self) -> bool {
        self.x.value() == 1 && self.y.is_zero()
    }
}

/// (x1 + √D y1)(x2 + √D y2) = (x1 x2 + D y1 y2) + √D (x1 y2 + x2 y1).
impl core::ops::Mul for Fp2Elem {
    type Output = Fp2Elem;
    fn mul(self, rhs: Fp2Elem) -> Fp2Elem {
        debug_assert_eq!(self.d, rhs.d);
        let x = self.x * rhs.x + self.d * self.y * rhs.y;
        let y = self.x * rhs.y + rhs.x * self.y;
        Fp2Elem::new(x, y, self.d)
    }
}

/// e^k by square-and-multiply; fp2_pow(e, 0) is the identity.
pub fn fp2_pow(e: Fp2Elem, mut k: u64) -> Fp2Elem {
    let mut base = e;
    let mut acc = Fp2Elem::one(e.d);
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

/// First (s, t) in scan order t = 1..p-1 outer, s = 0..p-1 inner such that
/// s + √D·t has multiplicative order exactly p² - 1. The t != 0 restriction
/// is free: subfield elements have order dividing p - 1.
pub fn find_primitive_fp2(p: u64, d: FpElem) -> (FpElem, FpElem) {
    let n = p * p - 1;
    let qs = distinct_prime_factors(n);
    for t in 1..p {
        for s in 0..p {
            let e = Fp2Elem::new(FpElem::new(s, p), FpElem::new(t, p), d);
            if qs.iter().all(|&q| !fp2_pow(e, n / q).is_one()) {
                return (FpElem::new(s, p), FpElem::new(t, p));
            }
        }
    }
    unreachable!("F_p^2 has a primitive element")
}

/// The smaller of the two roots of X² = -1 mod p; exists iff p ≡ 1 (mod 4).
/// Exhaustive search — p is small and this runs once per generation.
pub fn sqrt_minus_one(p: u64) -> Result<FpElem, Error> {
    if p % 4 != 1 {
        return Err(Error::NoSqrtMinusOne { p });
    }
    for r in 1..p {
        if (r * r) % p == p - 1 {
            return Ok(FpElem::new(r, p));
        }
    }
    unreachable!("p % 4 == 1 guarantees a root")
}
