//! The Hilbert space C(F_p) and the unitary operators on it: time shift,
//! modulation, scaling, chirp and the χ(+tj)-kernel Fourier transform,
//! assembled into the representation ρ of SL(2, F_p) by Bruhat decomposition.
//!
//! Operators are kept structurally (a permutation-with-sign, a diagonal
//! phase, a DFT, or a composition) and applied in O(p) / O(p²); the dense
//! p×p matrix is materialized lazily only where diagonalization needs it.

use crate::field::{legendre, primitive_root, FpElem};
use crate::tori::SL2;
use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;
use once_cell::race::OnceBox;

/// A function F_p -> C as a dense length-p vector, indexed by t = 0..p-1.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    pub entries: Vec<Complex64>,
}

impl CVec {
    pub fn new(entries: Vec<Complex64>) -> Self {
        CVec { entries }
    }

    pub fn zeros(p: u64) -> Self {
        CVec::new(vec![Complex64::new(0.0, 0.0); p as usize])
    }

    /// The delta spike at t.
    pub fn delta(p: u64, t: u64) -> Self {
        let mut v = CVec::zeros(p);
        v.entries[(t % p) as usize] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// ⟨f, g⟩ = Σ_t f(t)·conj(g(t)) — conjugate-linear in the second slot.
    pub fn inner(&self, other: &CVec) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn scaled(&self, s: Complex64) -> CVec {
        CVec::new(self.entries.iter().map(|z| z * s).collect())
    }
}

/// Precomputed character data for one prime: the additive character
/// χ(a) = e^(2πi a/p), the multiplicative characters ψ_j(α^k) = e^(2πi jk/(p-1))
/// built on the canonical generator α, and the Legendre character σ.
pub struct CharacterTable {
    p: u64,
    alpha: FpElem,
    chi_table: Vec<Complex64>,
    psi_roots: Vec<Complex64>,
    dlog: Vec<u64>,
}

impl CharacterTable {
    pub fn new(p: u64) -> Self {
        let alpha = primitive_root(p);
        let chi_table = (0..p)
            .map(|a| Complex64::from_polar(1.0, TAU * a as f64 / p as f64))
            .collect();
        let psi_roots = (0..p - 1)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / (p - 1) as f64))
            .collect();
        // discrete log base α; index 0 is never read (characters vanish or
        // are pinned by convention at 0)
        let mut dlog = vec![0u64; p as usize];
        let mut x = FpElem::new(1, p);
        for k in 0..p - 1 {
            dlog[x.value() as usize] = k;
            x = x * alpha;
        }
        CharacterTable {
            p,
            alpha,
            chi_table,
            psi_roots,
            dlog,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> FpElem {
        self.alpha
    }

    /// χ(a) = e^(2πi a/p).
    pub fn chi(&self, a: u64) -> Complex64 {
        self.chi_table[(a % self.p) as usize]
    }

    /// ψ_j(a); ψ_j(0) = 0 for j ≠ 0 and ψ_0(0) = 1 by convention.
    pub fn psi(&self, j: u64, a: u64) -> Complex64 {
        let a = a % self.p;
        let j = j % (self.p - 1);
        if a == 0 {
            return if j == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        let k = self.dlog[a as usize];
        self.psi_roots[((j as u128 * k as u128) % (self.p - 1) as u128) as usize]
    }

    /// σ(a) — the Legendre character.
    pub fn sigma(&self, a: u64) -> i64 {
        legendre(FpElem::new(a, self.p))
    }
}

// ---- dense matrices ----

/// A small dense complex matrix, row-major. Only the handful of operations
/// the diagonalization needs; p stays below a few hundred.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> CMat {
        CMat {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, rhs: &CMat, s: Complex64) {
        debug_assert_eq!(self.n, rhs.n);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b * s;
        }
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn col(&self, j: usize) -> CVec {
        CVec::new((0..self.n).map(|i| self.get(i, j)).collect())
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        debug_assert_eq!(self.n, v.len());
        let mut out = CVec::zeros(self.n as u64);
        for i in 0..self.n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.n {
                acc += self.get(i, j) * v.entries[j];
            }
            out.entries[i] = acc;
        }
        out
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

// ---- operators ----

/// Structural form of a unitary operator on C(F_p).
#[derive(Debug, Clone)]
pub enum OpForm {
    /// L_τ: f(t) ↦ f(t + τ)
    TimeShift(u64),
    /// M_ω: f(t) ↦ χ(ωt)·f(t)
    Modulation(u64),
    /// S_a: f(t) ↦ σ(a)·f(a⁻¹ t), a ≠ 0
    Scale(u64),
    /// N_b: f(t) ↦ χ(-2⁻¹ b t²)·f(t)
    Chirp(u64),
    /// F: f ↦ (1/√p)·Σ_t χ(tj) f(t); kernel sign e^(+2πi jt/p), the opposite
    /// of the usual engineering convention
    Dft,
    /// Right-to-left composition, matching ∘ notation: the LAST element is
    /// applied first.
    Composition(Vec<Operator>),
}

/// A unitary operator: its structural form plus a lazily cached dense
/// realization. The cache fill is idempotent and race-benign.
pub struct Operator {
    form: OpForm,
    dense: OnceBox<CMat>,
}

impl Clone for Operator {
    /// Clones the structural form; the dense cache starts empty.
    fn clone(&self) -> Self {
        Operator::new(self.form.clone())
    }
}

impl core::fmt::Debug for Operator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Operator")
            .field("form", &self.form)
            .finish()
    }
}

impl Operator {
    pub fn new(form: OpForm) -> Self {
        Operator {
            form,
            dense: OnceBox::new(),
        }
    }

    pub fn time_shift(tau: u64) -> Self {
        Operator::new(OpForm::TimeShift(tau))
    }
    pub fn modulation(omega: u64) -> Self {
        Operator::new(OpForm::Modulation(omega))
    }
    pub fn scale(a: u64) -> Self {
        Operator::new(OpForm::Scale(a))
    }
    pub fn chirp(b: u64) -> Self {
        Operator::new(OpForm::Chirp(b))
    }
    pub fn dft() -> Self {
        Operator::new(OpForm::Dft)
    }
    pub fn compose(ops: Vec<Operator>) -> Self {
        Operator::new(OpForm::Composition(ops))
    }

    pub fn form(&self) -> &OpForm {
        &self.form
    }

    pub fn apply(&self, ct: &CharacterTable, f: &CVec) -> CVec {
        match &self.form {
            OpForm::TimeShift(tau) => time_shift(*tau, f),
            OpForm::Modulation(omega) => modulation(ct, *omega, f),
            OpForm::Scale(a) => scale(ct, *a, f),
            OpForm::Chirp(b) => chirp(ct, *b, f),
            OpForm::Dft => dft(ct, f),
            OpForm::Composition(ops) => {
                let mut v = f.clone();
                for op in ops.iter().rev() {
                    v = op.apply(ct, &v);
                }
                v
            }
        }
    }

    /// Dense realization: column t is the image of δ_t. Computed once and
    /// cached; concurrent first calls may race to build it, the first
    /// finished copy wins and the rest are dropped.
    pub fn as_matrix(&self, ct: &CharacterTable) -> &CMat {
        self.dense.get_or_init(|| {
            let p = ct.p();
            let n = p as usize;
            let mut m = CMat::zeros(n);
            for t in 0..p {
                let col = self.apply(ct, &CVec::delta(p, t));
                for i in 0..n {
                    m.set(i, t as usize, col.entries[i]);
                }
            }
            Box::new(m)
        })
    }
}

/// L_τ f(t) = f(t + τ).
pub fn time_shift(tau: u64, f: &CVec) -> CVec {
    let p = f.len() as u64;
    let mut out = CVec::zeros(p);
    for t in 0..p {
        out.entries[t as usize] = f.entries[((t + tau) % p) as usize];
    }
    out
}

/// M_ω f(t) = χ(ωt)·f(t).
pub fn modulation(ct: &CharacterTable, omega: u64, f: &CVec) -> CVec {
    let p = ct.p();
    debug_assert_eq!(p as usize, f.len());
    let mut out = CVec::zeros(p);
    for t in 0..p {
        out.entries[t as usize] = ct.chi(omega % p * t % p) * f.entries[t as usize];
    }
    out
}

/// S_a f(t) = σ(a)·f(a⁻¹ t); a must be nonzero (diag(a, a⁻¹) needs a unit).
pub fn scale(ct: &CharacterTable, a: u64, f: &CVec) -> CVec {
    let p = ct.p();
    debug_assert_eq!(p as usize, f.len());
    assert!(!a.is_multiple_of(p), "scale by zero is not a group element");
    let ainv = FpElem::new(a, p).inv().value();
    let sign = ct.sigma(a) as f64;
    let mut out = CVec::zeros(p);
    for t in 0..p {
        out.entries[t as usize] = sign * f.entries[(ainv * t % p) as usize];
    }
    out
}

/// N_b f(t) = χ(-2⁻¹ b t²)·f(t).
pub fn chirp(ct: &CharacterTable, b: u64, f: &CVec) -> CVec {
    let p = ct.p();
    debug_assert_eq!(p as usize, f.len());
    let half = FpElem::new(2, p).inv().value();
    let mut out = CVec::zeros(p);
    for t in 0..p {
        let q = half * (b % p) % p * (t * t % p) % p;
        out.entries[t as usize] = ct.chi(p - q) * f.entries[t as usize];
    }
    out
}

/// F f(j) = (1/√p)·Σ_t χ(tj)·f(t) — direct O(p²) summation.
pub fn dft(ct: &CharacterTable, f: &CVec) -> CVec {
    let p = ct.p();
    debug_assert_eq!(p as usize, f.len());
    let scale = 1.0 / libm::sqrt(p as f64);
    let mut out = CVec::zeros(p);
    for j in 0..p {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..p {
            acc += ct.chi(t * j % p) * f.entries[t as usize];
        }
        out.entries[j as usize] = acc * scale;
    }
    out
}

/// ρ(g) by Bruhat decomposition. For g = [[a, b], [c, d]]:
/// b ≠ 0: ρ(g) = S_b ∘ N_{bd} ∘ F ∘ N_{ab⁻¹};  b = 0: ρ(g) = S_a ∘ N_{ac}.
/// Multiplicative only up to a unimodular scalar, which is invisible to
/// the phase-normalized dictionary vectors downstream.
pub fn rho(g: &SL2) -> Operator {
    let (a, b, c, d) = (g.a(), g.b(), g.c(), g.d());
    if !b.is_zero() {
        Operator::compose(vec![
            Operator::scale(b.value()),
            Operator::chirp((b * d).value()),
            Operator::dft(),
            Operator::chirp((a * b.inv()).value()),
        ])
    } else {
        Operator::compose(vec![
            Operator::scale(a.value()),
            Operator::chirp((a * c).value()),
        ])
    }
}
