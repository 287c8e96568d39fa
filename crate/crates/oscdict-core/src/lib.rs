//! Construction and verification of finite oscillator dictionaries over the
//! prime field F_p: families of unit-norm length-p complex sequences with
//! near-optimal auto/cross-correlation, obtained as eigenbases of maximal
//! torus actions under the Weil representation of SL(2, F_p).
//!
//! The crate is `no_std` (allocator required); IO and file formats live in
//! the companion CLI crate.

#![no_std]

extern crate alloc;

pub mod dict;
pub mod field;
pub mod tori;
pub mod verify;
pub mod weil;

pub use dict::{
    gen_dictionary, gen_nonsplit_dict, gen_split_dict, DictEntry, DictKind, Dictionary, Kind,
    RepParams,
};
pub use field::{Fp2Elem, FpElem};
pub use verify::{run_checks, CheckId, CheckStatus, Report, VerifyOpts};
pub use weil::{CVec, CharacterTable};

use core::fmt;

/// Failures of the generation pipeline that a caller can sensibly handle.
/// Contract violations (mismatched moduli, out-of-range parameters) panic
/// instead; they indicate a bug in the calling code, not bad input.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `sqrt_minus_one` requires p ≡ 1 (mod 4).
    NoSqrtMinusOne { p: u64 },
    /// An operation needed a non-square D but got a square (or zero).
    ExpectedNonSquare { d: u64, p: u64 },
    /// s + √D·t does not generate the full multiplicative group of F_{p²}.
    NotPrimitive { s: u64, t: u64 },
    /// The torus generator candidate does not have order p + 1.
    WrongOrder { expected: u64 },
    /// U^{p+1} is not a scalar matrix within tolerance.
    NotScalar { deviation: f64 },
    /// A character projection has Frobenius norm in the forbidden middle
    /// band (neither rank one nor rank zero).
    ProjectionRank { k: u64, norm: f64 },
    /// The rank-one / rank-zero projection counts are not (p, 1).
    RankPattern { ones: u64, zeros: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoSqrtMinusOne { p } => {
                write!(f, "no square root of -1 mod {p} (p % 4 != 1)")
            }
            Error::ExpectedNonSquare { d, p } => {
                write!(f, "{d} is not a non-square mod {p}")
            }
            Error::NotPrimitive { s, t } => {
                write!(f, "{s} + sqrt(D)*{t} is not primitive in F_p^2")
            }
            Error::WrongOrder { expected } => {
                write!(f, "torus generator does not have order {expected}")
            }
            Error::NotScalar { deviation } => {
                write!(f, "generator power is not scalar (deviation {deviation:e})")
            }
            Error::ProjectionRank { k, norm } => {
                write!(f, "projection {k} has intermediate Frobenius norm {norm:e}")
            }
            Error::RankPattern { ones, zeros } => write!(
                f,
                "projection ranks: {ones} rank-one and {zeros} rank-zero (want p and 1)"
            ),
        }
    }
}
