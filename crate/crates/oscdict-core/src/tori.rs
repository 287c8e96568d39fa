//! SL(2, F_p) matrices and the maximal-torus bookkeeping: the non-split
//! torus T_D with its cyclic generator and normalizer, and the coset
//! representatives that enumerate the distinct conjugate tori of each kind.

use crate::field::{find_nonsquare, legendre, sqrt_minus_one, FpElem};
use crate::Error;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

/// Which family of maximal tori a torus or dictionary entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Split,
    Nonsplit,
}

/// A 2x2 matrix over F_p with determinant 1. Construction checks the
/// determinant, so every value of this type is a genuine group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SL2 {
    a: FpElem,
    b: FpElem,
    c: FpElem,
    d: FpElem,
}

impl SL2 {
    pub fn new(a: FpElem, b: FpElem, c: FpElem, d: FpElem) -> Self {
        let det = a * d - b * c;
        assert_eq!(det.value(), 1, "matrix is not in SL(2, F_p)");
        SL2 { a, b, c, d }
    }

    pub fn from_values(a: u64, b: u64, c: u64, d: u64, p: u64) -> Self {
        SL2::new(
            FpElem::new(a, p),
            FpElem::new(b, p),
            FpElem::new(c, p),
            FpElem::new(d, p),
        )
    }

    pub fn identity(p: u64) -> Self {
        SL2::from_values(1, 0, 0, 1, p)
    }

    /// The Weyl element w = [[0, 1], [-1, 0]].
    pub fn w(p: u64) -> Self {
        SL2::from_values(0, 1, p - 1, 0, p)
    }

    pub fn a(&self) -> FpElem {
        self.a
    }
    pub fn b(&self) -> FpElem {
        self.b
    }
    pub fn c(&self) -> FpElem {
        self.c
    }
    pub fn d(&self) -> FpElem {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.a.modulus()
    }

    pub fn mul(&self, rhs: &SL2) -> SL2 {
        SL2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Inverse of a determinant-1 matrix: [[d, -b], [-c, a]].
    pub fn inv(&self) -> SL2 {
        SL2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn pow(&self, k: u64) -> SL2 {
        let mut acc = SL2::identity(self.modulus());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.a.value() == 1 && self.b.is_zero() && self.c.is_zero() && self.d.value() == 1
    }

    /// Multiplicative order; every element order divides |SL(2,F_p)|, so the
    /// walk below terminates long before the safety bound.
    pub fn order(&self) -> u64 {
        let mut x = *self;
        let bound = self.modulus().pow(3) * 2;
        for k in 1..=bound {
            if x.is_identity() {
                return k;
            }
            x = x.mul(self);
        }
        unreachable!("group element order exceeded the group size")
    }
}

/// All of SL(2, F_p) by scan; |SL2| = p(p-1)(p+1), so this is only for the
/// exhaustive small-p certifications.
pub fn enumerate_sl2(p: u64) -> Vec<SL2> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 1 % p {
                        out.push(SL2::from_values(a, b, c, d, p));
                    }
                }
            }
        }
    }
    out
}

/// The non-split torus T_D = {[[x, y], [Dy, x]] : x² - Dy² = 1}, as a list
/// in lexicographic (x, y) order. Errors if D is a square: the same shape
/// with square D is conjugate to the diagonal torus instead.
pub fn enumerate_td(p: u64, d: FpElem) -> Result<Vec<SL2>, Error> {
    if legendre(d) != -1 {
        return Err(Error::ExpectedNonSquare { d: d.value(), p });
    }
    let mut out = Vec::new();
    for x in 0..p {
        for y in 0..p {
            let xe = FpElem::new(x, p);
            let ye = FpElem::new(y, p);
            if (xe * xe - d * ye * ye).value() == 1 {
                out.push(SL2::new(xe, ye, d * ye, xe));
            }
        }
    }
    debug_assert_eq!(out.len() as u64, p + 1);
    Ok(out)
}

/// Generator of T_D from a primitive s + √D·t:
/// g_D = [[u, v], [Dv, u]] with u = (s² + Dt²)/(s² - Dt²), v = -2st/(s² - Dt²).
/// The order-(p+1) check certifies that (s, t) really was primitive.
pub fn build_gd(p: u64, d: FpElem, s: FpElem, t: FpElem) -> Result<SL2, Error> {
    let s2 = s * s;
    let dt2 = d * t * t;
    let den = s2 - dt2;
    debug_assert!(!den.is_zero(), "s^2 = D t^2 is impossible for non-square D");
    let den_inv = den.inv();
    let u = (s2 + dt2) * den_inv;
    let v = -(s * t * FpElem::new(2, p)) * den_inv;
    let g = SL2::new(u, v, d * v, u);
    if g.order() != p + 1 {
        return Err(Error::NotPrimitive {
            s: s.value(),
            t: t.value(),
        });
    }
    Ok(g)
}

/// T_D plus its distinguished generator; elements listed as the powers
/// g_D⁰ … g_Dᵖ.
#[derive(Debug, Clone)]
pub struct TorusDescriptor {
    pub d: FpElem,
    pub generator: SL2,
    pub elements: Vec<SL2>,
}

impl TorusDescriptor {
    pub fn new(p: u64, d: FpElem, generator: SL2) -> Result<Self, Error> {
        if generator.order() != p + 1 {
            return Err(Error::WrongOrder { expected: p + 1 });
        }
        let mut elements = Vec::with_capacity(p as usize + 1);
        let mut x = SL2::identity(p);
        for _ in 0..=p {
            elements.push(x);
            x = x.mul(&generator);
        }
        Ok(TorusDescriptor {
            d,
            generator,
            elements,
        })
    }
}

/// Membership in the normalizer N_D of T_D: either [[a, b], [bD, a]] with
/// a² - b²D = 1 (the torus itself) or [[x, y], [-yD, -x]] with y²D - x² = 1.
pub fn in_normalizer_nd(g: &SL2, d: FpElem) -> bool {
    let p = g.modulus();
    let (a, b, c, dd) = (g.a(), g.b(), g.c(), g.d());
    let torus_shape = c == d * b && a == dd && (a * a - d * b * b).value() == 1;
    let flip_shape = c == -(d * b) && dd == -a && (d * b * b - a * a).value() == 1;
    debug_assert_eq!(p, d.modulus());
    torus_shape || flip_shape
}

/// Membership in the normalizer N_A of the diagonal torus: diagonal
/// [[a, 0], [0, a⁻¹]] or anti-diagonal [[0, a], [-a⁻¹, 0]].
pub fn in_normalizer_na(g: &SL2) -> bool {
    let diagonal = g.b().is_zero() && g.c().is_zero();
    let anti = g.a().is_zero() && g.d().is_zero();
    diagonal || anti
}

/// Ordered coset representatives for one torus family, plus the auxiliary
/// index set S in the non-split p ≡ 1 (mod 4) case.
#[derive(Debug, Clone)]
pub struct CosetReps {
    pub kind: Kind,
    pub reps: Vec<SL2>,
    /// Generating parameters per rep: (b, c, false) for split reps
    /// [[1, b], [c, 1+bc]]; (a, c, w) for non-split reps [[a,0],[c,a⁻¹]]·wᵂ.
    pub params: Vec<(u64, u64, bool)>,
    pub aux_s: Option<Vec<FpElem>>,
}

/// R_A = {[[1, b], [c, 1 + bc]] : 0 ≤ b ≤ (p-1)/2, 0 ≤ c ≤ p-1},
/// ordered by (b, c); one rep per split maximal torus.
pub fn coset_reps_split(p: u64) -> CosetReps {
    let mut reps = Vec::new();
    let mut params = Vec::new();
    for b in 0..=(p - 1) / 2 {
        for c in 0..p {
            let be = FpElem::new(b, p);
            let ce = FpElem::new(c, p);
            reps.push(SL2::new(
                FpElem::new(1, p),
                be,
                ce,
                FpElem::new(1, p) + be * ce,
            ));
            params.push((b, c, false));
        }
    }
    debug_assert_eq!(reps.len() as u64, p * (p + 1) / 2);
    CosetReps {
        kind: Kind::Split,
        reps,
        params,
        aux_s: None,
    }
}

/// The index set S for p ≡ 1 (mod 4): F_p^* splits into orbits
/// {x, -x, ix, -ix} (i = √-1), each containing exactly two residues in
/// [1, (p-1)/2]; S keeps the smaller of those two per orbit, |S| = (p-1)/4.
pub fn build_s(p: u64) -> Result<Vec<FpElem>, Error> {
    let i = sqrt_minus_one(p)?.value();
    let mut seen = BTreeSet::new();
    let mut s = Vec::new();
    for x in 1..p {
        if seen.contains(&x) {
            continue;
        }
        let orbit = [x, p - x, (i * x) % p, (p - (i * x) % p) % p];
        let mut lower: Vec<u64> = orbit
            .iter()
            .copied()
            .filter(|&o| o <= (p - 1) / 2)
            .collect();
        lower.sort_unstable();
        debug_assert_eq!(lower.len(), 2, "orbit of {x} mod {p} is degenerate");
        for o in orbit {
            seen.insert(o);
        }
        s.push(FpElem::new(lower[0], p));
    }
    debug_assert_eq!(s.len() as u64, (p - 1) / 4);
    Ok(s)
}

/// Coset representatives for the non-split family, ½p(p-1) of them.
/// p ≡ 3 (mod 4): {[[a, 0], [c, a⁻¹]] : 1 ≤ a ≤ (p-1)/2, 0 ≤ c ≤ p-1}.
/// p ≡ 1 (mod 4): the same shape with a restricted to S, each taken with
/// and without a right factor of w. Ordered by (a, c, w-flag).
pub fn coset_reps_nonsplit(p: u64, d: FpElem) -> Result<CosetReps, Error> {
    if legendre(d) != -1 {
        return Err(Error::ExpectedNonSquare { d: d.value(), p });
    }
    let mut reps = Vec::new();
    let mut params = Vec::new();
    let mut aux = None;
    if p % 4 == 3 {
        for a in 1..=(p - 1) / 2 {
            for c in 0..p {
                let ae = FpElem::new(a, p);
                reps.push(SL2::new(ae, FpElem::new(0, p), FpElem::new(c, p), ae.inv()));
                params.push((a, c, false));
            }
        }
    } else {
        let s = build_s(p)?;
        let w = SL2::w(p);
        for ae in &s {
            for c in 0..p {
                let base = SL2::new(*ae, FpElem::new(0, p), FpElem::new(c, p), ae.inv());
                reps.push(base);
                params.push((ae.value(), c, false));
                reps.push(base.mul(&w));
                params.push((ae.value(), c, true));
            }
        }
        aux = Some(s);
    }
    debug_assert_eq!(reps.len() as u64, p * (p - 1) / 2);
    Ok(CosetReps {
        kind: Kind::Nonsplit,
        reps,
        params,
        aux_s: aux,
    })
}

/// Convenience: the canonical torus data for a given p (and optional D
/// override): D, (s, t), g_D.
pub fn canonical_torus(
    p: u64,
    d_override: Option<u64>,
) -> Result<(FpElem, (FpElem, FpElem), SL2), Error> {
    let d = match d_override {
        Some(v) => {
            let e = FpElem::new(v, p);
            if legendre(e) != -1 {
                return Err(Error::ExpectedNonSquare { d: v, p });
            }
            e
        }
        None => find_nonsquare(p),
    };
    let (s, t) = crate::field::find_primitive_fp2(p, d);
    let g = build_gd(p, d, s, t)?;
    Ok((d, (s, t), g))
}
