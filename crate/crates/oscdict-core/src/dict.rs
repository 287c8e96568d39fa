//! Dictionary generation. Split-torus vectors come from closed-form
//! evaluation of the multiplicative characters under chirp modulation;
//! nonsplit-torus vectors are extracted spectrally, by projecting onto the
//! eigenspaces of the torus generator's operator image and then sweeping the
//! family across coset representatives.

use crate::field::FpElem;
use crate::tori::{build_s, canonical_torus, SL2};
use crate::weil::{chirp, dft, rho, scale, CMat, CVec, CharacterTable};
use crate::Error;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;

pub use crate::tori::Kind;

/// Human-readable statement of the entry order inside a dictionary, stored
/// in serialized metadata so files are self-describing.
pub const ORDERING: &str = "split:(x,y,z) lex; nonsplit:(a,c,w) lex then eigenindex k";

/// Coset-representative parameters that produced an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepParams {
    /// Chirp parameters for a split entry: φ_{x,y,z}.
    Split { y: u64, z: u64 },
    /// Lower-triangular rep [[a,0],[c,a⁻¹]] for a nonsplit entry, with an
    /// optional trailing Weyl factor.
    Nonsplit { a: u64, c: u64, w: bool },
}

/// One dictionary vector plus the labels that identify where it came from.
#[derive(Debug, Clone)]
pub struct DictEntry {
    pub vector: CVec,
    pub kind: Kind,
    /// The character/eigenvector index: x for split entries, the eigenindex
    /// k of the underlying basis vector for nonsplit entries.
    pub char_index: u64,
    pub rep: RepParams,
}

/// Which families a dictionary holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DictKind {
    Split,
    Nonsplit,
    Both,
}

impl DictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DictKind::Split => "split",
            DictKind::Nonsplit => "nonsplit",
            DictKind::Both => "both",
        }
    }
}

/// A generated (or decoded) dictionary together with the parameters that
/// make it reproducible.
#[derive(Debug, Clone)]
pub struct Dictionary {
    pub p: u64,
    /// Nonsplit torus discriminant; None for split-only dictionaries.
    pub d: Option<u64>,
    pub kind: DictKind,
    pub entries: Vec<DictEntry>,
    /// Canonical generator of F_p*.
    pub alpha: u64,
    /// The (s, t) pair behind the nonsplit torus generator.
    pub st: Option<(u64, u64)>,
    /// Measured scalar c with ρ(g_D)^(p+1) = c·I.
    pub c_scalar: Option<Complex64>,
    pub version: String,
    pub ordering: String,
}

/// Multiply by a unimodular scalar so the first entry with |z| > 1e-12
/// becomes real and positive. Panics on the zero vector.
pub fn phase_normalize(v: &CVec) -> CVec {
    let lead = v
        .entries
        .iter()
        .find(|z| z.norm() > 1e-12)
        .expect("cannot phase-normalize the zero vector");
    v.scaled(lead.conj() / lead.norm())
}

/// The split-torus eigenbasis B_A = {s·ψ_x : 1 ≤ x ≤ p-2}, s = (p-1)^(-1/2),
/// indexed so that element i corresponds to x = i + 1.
pub fn split_basis(ct: &CharacterTable) -> Vec<CVec> {
    let p = ct.p();
    let s = 1.0 / libm::sqrt((p - 1) as f64);
    (1..=p - 2)
        .map(|x| CVec::new((0..p).map(|t| ct.psi(x, t) * s).collect()))
        .collect()
}

/// Closed-form split dictionary vector φ_{x,y,z} (not yet phase-normalized):
///   z = 0:  φ(t) = s·ψ_x(t)·χ(y t²)
///   z ≠ 0:  φ(t) = χ(y t²)·(p(p-1))^(-1/2)·Σ_{j=1}^{p-1} ψ_x(j)·χ(-(2z)⁻¹(j-t)²)
pub fn split_closed_form(ct: &CharacterTable, x: u64, y: u64, z: u64) -> CVec {
    let p = ct.p();
    assert!((1..=p - 2).contains(&x), "x must lie in 1..=p-2");
    assert!(y < p, "y must lie in 0..p");
    assert!(z <= (p - 1) / 2, "z must lie in 0..=(p-1)/2");
    if z == 0 {
        let s = 1.0 / libm::sqrt((p - 1) as f64);
        return CVec::new(
            (0..p)
                .map(|t| ct.psi(x, t) * ct.chi(y * (t * t % p) % p) * s)
                .collect(),
        );
    }
    let s = 1.0 / libm::sqrt((p * (p - 1)) as f64);
    let inv2z = FpElem::new(2 * z, p).inv().value();
    CVec::new(
        (0..p)
            .map(|t| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 1..p {
                    let diff = (j + p - t) % p;
                    let q = inv2z * (diff * diff % p) % p;
                    acc += ct.psi(x, j) * ct.chi(p - q);
                }
                acc * ct.chi(y * (t * t % p) % p) * s
            })
            .collect(),
    )
}

/// The split family: (p-2)·p·(p+1)/2 phase-normalized vectors, ordered
/// x outer, then y, then z.
pub fn gen_split_dict(p: u64) -> Dictionary {
    let ct = CharacterTable::new(p);
    let mut entries = Vec::new();
    for x in 1..=p - 2 {
        for y in 0..p {
            for z in 0..=(p - 1) / 2 {
                entries.push(DictEntry {
                    vector: phase_normalize(&split_closed_form(&ct, x, y, z)),
                    kind: Kind::Split,
                    char_index: x,
                    rep: RepParams::Split { y, z },
                });
            }
        }
    }
    Dictionary {
        p,
        d: None,
        kind: DictKind::Split,
        entries,
        alpha: ct.alpha().value(),
        st: None,
        c_scalar: None,
        version: env!("CARGO_PKG_VERSION").into(),
        ordering: ORDERING.into(),
    }
}

/// An eigenvector of ρ(g_D) with its eigenvalue and spectral index.
#[derive(Debug, Clone)]
pub struct EigPair {
    /// Index of the eigenvalue as μ·ζ^k, ζ = e^(2πi/(p+1)).
    pub k: u64,
    pub lambda: Complex64,
    pub vector: CVec,
}

/// The nonsplit eigenbasis plus the measured scalar from ρ(g_D)^(p+1) = c·I.
#[derive(Debug, Clone)]
pub struct NonsplitBasis {
    pub eigenpairs: Vec<EigPair>,
    pub c_scalar: Complex64,
}

/// Diagonalize ρ(g_D) by root-of-unity projections. g_D has order p+1, so
/// U = ρ(g_D) satisfies U^(p+1) = c·I for a unimodular scalar c; with
/// μ = c^(1/(p+1)) principal, U/μ has exact order p+1 and its spectral
/// projections P_k = (p+1)⁻¹·Σ_m ζ^(-km)·(U/μ)^m are computable without any
/// general-purpose eigensolver. Exactly p of them have rank 1 (the
/// one-dimensional eigenspaces) and one is zero: that pattern is verified,
/// not assumed.
pub fn nonsplit_basis(ct: &CharacterTable, gd: &SL2) -> Result<NonsplitBasis, Error> {
    let p = ct.p();
    let n = (p + 1) as usize;
    let u = rho(gd);
    let u = u.as_matrix(ct);

    // powers U^0 .. U^(p+1)
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(CMat::identity(p as usize));
    for m in 1..=n {
        let next = powers[m - 1].mul(u);
        powers.push(next);
    }

    let c = powers[n].get(0, 0);
    let dev_id = powers[n].max_abs_diff(&CMat::identity(p as usize).scaled(c));
    let dev_mod = (c.norm() - 1.0).abs();
    if dev_id > 1e-9 || dev_mod > 1e-9 {
        return Err(Error::NotScalar {
            deviation: if dev_id > dev_mod { dev_id } else { dev_mod },
        });
    }

    let theta = c.arg() / (p + 1) as f64;
    let mu = Complex64::from_polar(1.0, theta);

    let mut eigenpairs = Vec::new();
    let mut rank_one = 0u64;
    let mut rank_zero = 0u64;
    for k in 0..p + 1 {
        let mut proj = CMat::zeros(p as usize);
        for (m, um) in powers.iter().take(n).enumerate() {
            // ζ^(-km)·μ^(-m) / (p+1)
            let phase =
                -(TAU * ((k * m as u64) % (p + 1)) as f64 / (p + 1) as f64) - theta * m as f64;
            proj.add_assign_scaled(um, Complex64::from_polar(1.0 / (p + 1) as f64, phase));
        }
        let fro = proj.frobenius();
        if fro < 1e-6 {
            rank_zero += 1;
            continue;
        }
        if fro <= 0.5 {
            return Err(Error::ProjectionRank { k, norm: fro });
        }
        rank_one += 1;
        // rank-1 projector: every nonzero column is the eigenvector
        let best = (0..p as usize)
            .max_by(|&i, &j| {
                proj.col(i)
                    .norm()
                    .partial_cmp(&proj.col(j).norm())
                    .expect("column norms are finite")
            })
            .expect("p > 0");
        let col = proj.col(best);
        let vector = phase_normalize(&col.scaled(Complex64::new(1.0 / col.norm(), 0.0)));
        let zeta_k = Complex64::from_polar(1.0, TAU * k as f64 / (p + 1) as f64);
        eigenpairs.push(EigPair {
            k,
            lambda: mu * zeta_k,
            vector,
        });
    }
    if rank_one != p || rank_zero != 1 {
        return Err(Error::RankPattern {
            ones: rank_one,
            zeros: rank_zero,
        });
    }
    Ok(NonsplitBasis {
        eigenpairs,
        c_scalar: c,
    })
}

/// The nonsplit family: ½·p²·(p-1) phase-normalized vectors swept from the
/// eigenbasis by scale/chirp coset representatives (with a Weyl-factor
/// doubling when p ≡ 1 mod 4), ordered (a, c, w) outer then eigenindex k.
pub fn gen_nonsplit_dict(p: u64, d_override: Option<u64>) -> Result<Dictionary, Error> {
    let ct = CharacterTable::new(p);
    let (d, (s, t), gd) = canonical_torus(p, d_override)?;
    let basis = nonsplit_basis(&ct, &gd)?;

    let mut entries = Vec::new();
    let mut push_family = |a: u64, c: u64, w: bool, base: &[(u64, CVec)]| {
        let ac = a * c % p;
        for (k, vec) in base {
            let v = scale(&ct, a, &chirp(&ct, ac, vec));
            entries.push(DictEntry {
                vector: phase_normalize(&v),
                kind: Kind::Nonsplit,
                char_index: *k,
                rep: RepParams::Nonsplit { a, c, w },
            });
        }
    };

    let plain: Vec<(u64, CVec)> = basis
        .eigenpairs
        .iter()
        .map(|e| (e.k, e.vector.clone()))
        .collect();
    if p % 4 == 3 {
        for a in 1..=(p - 1) / 2 {
            for c in 0..p {
                push_family(a, c, false, &plain);
            }
        }
    } else {
        let transformed: Vec<(u64, CVec)> = plain.iter().map(|(k, v)| (*k, dft(&ct, v))).collect();
        for a in build_s(p)? {
            for c in 0..p {
                push_family(a.value(), c, false, &plain);
                push_family(a.value(), c, true, &transformed);
            }
        }
    }

    Ok(Dictionary {
        p,
        d: Some(d.value()),
        kind: DictKind::Nonsplit,
        entries,
        alpha: ct.alpha().value(),
        st: Some((s.value(), t.value())),
        c_scalar: Some(basis.c_scalar),
        version: env!("CARGO_PKG_VERSION").into(),
        ordering: ORDERING.into(),
    })
}

/// Generate a dictionary of the requested kind; `Both` concatenates the
/// split family followed by the nonsplit family.
pub fn gen_dictionary(
    p: u64,
    kind: DictKind,
    d_override: Option<u64>,
) -> Result<Dictionary, Error> {
    match kind {
        DictKind::Split => Ok(gen_split_dict(p)),
        DictKind::Nonsplit => gen_nonsplit_dict(p, d_override),
        DictKind::Both => {
            let split = gen_split_dict(p);
            let mut ns = gen_nonsplit_dict(p, d_override)?;
            let mut entries = split.entries;
            entries.append(&mut ns.entries);
            Ok(Dictionary {
                kind: DictKind::Both,
                entries,
                ..ns
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::time_shift;

    const EPS: f64 = 1e-10;

    fn unit_overlap(a: &CVec, b: &CVec) -> f64 {
        a.inner(b).norm() / (a.norm() * b.norm())
    }

    #[test]
    fn split_basis_are_scale_eigenvectors() {
        // scale(α) acts on s·ψ_x by the scalar -e^(-2πi x/(p-1))
        for p in [5u64, 7] {
            let ct = CharacterTable::new(p);
            let alpha = ct.alpha().value();
            for (i, v) in split_basis(&ct).iter().enumerate() {
                let x = i as u64 + 1;
                let got = scale(&ct, alpha, v);
                let lam = -Complex64::from_polar(1.0, -TAU * x as f64 / (p - 1) as f64);
                let want = v.scaled(lam);
                for (g, w) in got.entries.iter().zip(&want.entries) {
                    assert!((g - w).norm() < EPS);
                }
            }
        }
    }

    #[test]
    fn split_closed_form_z0_shape() {
        let ct = CharacterTable::new(7);
        let s = 1.0 / libm::sqrt(6.0);
        for x in 1..=5u64 {
            for y in 0..7u64 {
                let v = split_closed_form(&ct, x, y, 0);
                assert!(v.entries[0].norm() < 1e-15, "vanishes at t = 0");
                for t in 1..7usize {
                    assert!((v.entries[t].norm() - s).abs() < EPS);
                }
                assert!((v.norm() - 1.0).abs() < EPS);
            }
        }
    }

    #[test]
    fn split_closed_form_matches_operator_image() {
        // φ_{x,y,z} is (up to phase) ρ([[1, z], [-2y, 1 - 2yz]]) applied
        // to the basis vector s·ψ_x
        for p in [5u64, 7] {
            let ct = CharacterTable::new(p);
            let basis = split_basis(&ct);
            for x in 1..=p - 2 {
                for y in 0..p {
                    for z in 0..=(p - 1) / 2 {
                        let closed = split_closed_form(&ct, x, y, z);
                        let b = FpElem::new(z, p);
                        let c = FpElem::from_i64(-2 * y as i64, p);
                        let d = FpElem::new(1, p) + b * c;
                        let g = SL2::from_values(1, b.value(), c.value(), d.value(), p);
                        let img = rho(&g).apply(&ct, &basis[(x - 1) as usize]);
                        assert!(
                            (unit_overlap(&closed, &img) - 1.0).abs() < 1e-9,
                            "p={p} x={x} y={y} z={z}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn split_dict_size_and_norms() {
        for (p, want) in [(5u64, 45usize), (7, 140)] {
            let dict = gen_split_dict(p);
            assert_eq!(dict.entries.len(), want);
            assert_eq!(dict.kind, DictKind::Split);
            assert_eq!(dict.d, None);
            for e in &dict.entries {
                assert!((e.vector.norm() - 1.0).abs() < EPS);
                assert_eq!(e.kind, Kind::Split);
            }
        }
    }

    #[test]
    fn nonsplit_basis_eigen_relation() {
        for p in [5u64, 7, 11] {
            let ct = CharacterTable::new(p);
            let (_, _, gd) = canonical_torus(p, None).unwrap();
            let basis = nonsplit_basis(&ct, &gd).unwrap();
            assert_eq!(basis.eigenpairs.len(), p as usize);
            assert!((basis.c_scalar - Complex64::new(1.0, 0.0)).norm() < 1e-9);
            let op = rho(&gd);
            for e in &basis.eigenpairs {
                let img = op.apply(&ct, &e.vector);
                let want = e.vector.scaled(e.lambda);
                let resid: f64 = img
                    .entries
                    .iter()
                    .zip(&want.entries)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>();
                assert!(libm::sqrt(resid) < 1e-9, "p={p} k={}", e.k);
                assert!((e.vector.norm() - 1.0).abs() < EPS);
            }
        }
    }

    #[test]
    fn nonsplit_missing_eigenindex() {
        // which k drops out is a measured fact of the canonical setup
        for (p, missing) in [(5u64, 0u64), (7, 2), (11, 9)] {
            let ct = CharacterTable::new(p);
            let (_, _, gd) = canonical_torus(p, None).unwrap();
            let ks: Vec<u64> = nonsplit_basis(&ct, &gd)
                .unwrap()
                .eigenpairs
                .iter()
                .map(|e| e.k)
                .collect();
            assert_eq!(ks.len(), p as usize);
            assert!(!ks.contains(&missing), "p={p}: expected k={missing} absent");
            for k in 0..p + 1 {
                assert_eq!(ks.contains(&k), k != missing);
            }
        }
    }

    #[test]
    fn nonsplit_dict_sizes() {
        for (p, want) in [(5u64, 50usize), (7, 147)] {
            let dict = gen_nonsplit_dict(p, None).unwrap();
            assert_eq!(dict.entries.len(), want);
            for e in &dict.entries {
                assert!((e.vector.norm() - 1.0).abs() < EPS);
                assert_eq!(e.kind, Kind::Nonsplit);
            }
            // w-factor entries appear exactly when p ≡ 1 mod 4
            let has_w = dict
                .entries
                .iter()
                .any(|e| matches!(e.rep, RepParams::Nonsplit { w: true, .. }));
            assert_eq!(has_w, p % 4 == 1);
        }
    }

    #[test]
    fn both_dictionary_concatenates() {
        let dict = gen_dictionary(5, DictKind::Both, None).unwrap();
        assert_eq!(dict.entries.len(), 95);
        assert_eq!(dict.kind, DictKind::Both);
        assert_eq!(dict.entries[0].kind, Kind::Split);
        assert_eq!(dict.entries[94].kind, Kind::Nonsplit);
        assert_eq!(dict.d, Some(2));
        assert_eq!(dict.st, Some((2, 1)));
        // split prefix agrees with the standalone split dictionary
        let split = gen_split_dict(5);
        for (a, b) in dict.entries[..45].iter().zip(&split.entries) {
            assert_eq!(a.char_index, b.char_index);
            assert_eq!(a.rep, b.rep);
        }
    }

    #[test]
    fn entries_within_one_rep_are_orthonormal() {
        // each coset representative carries an orthonormal image of a basis
        let dict = gen_dictionary(7, DictKind::Both, None).unwrap();
        let groups: Vec<RepParams> = {
            let mut seen = Vec::new();
            for e in &dict.entries {
                if !seen.contains(&e.rep) {
                    seen.push(e.rep);
                }
            }
            seen
        };
        for rep in groups {
            // RepParams variants already encode the family, so rep equality
            // never mixes split and nonsplit members
            let members: Vec<&DictEntry> = dict.entries.iter().filter(|e| e.rep == rep).collect();
            for (i, a) in members.iter().enumerate() {
                for b in members.iter().skip(i + 1) {
                    assert!(a.vector.inner(&b.vector).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn no_duplicate_entries() {
        let dict = gen_dictionary(5, DictKind::Both, None).unwrap();
        let mut max_overlap: f64 = 0.0;
        for (i, a) in dict.entries.iter().enumerate() {
            for b in dict.entries.iter().skip(i + 1) {
                max_overlap = max_overlap.max(a.vector.inner(&b.vector).norm());
            }
        }
        // the closest distinct pair at p = 5 — well below 1
        assert!((max_overlap - 0.9834053990).abs() < 1e-7);
    }

    #[test]
    fn phase_normalize_canonicalizes() {
        let ct = CharacterTable::new(7);
        let v = split_closed_form(&ct, 2, 3, 1);
        let n1 = phase_normalize(&v);
        let rotated = v.scaled(Complex64::from_polar(1.0, 1.234));
        let n2 = phase_normalize(&rotated);
        for (a, b) in n1.entries.iter().zip(&n2.entries) {
            assert!((a - b).norm() < EPS);
        }
        let lead = n1.entries.iter().find(|z| z.norm() > 1e-12).unwrap();
        assert!(lead.im.abs() < EPS && lead.re > 0.0);
        // idempotent
        let n3 = phase_normalize(&n1);
        for (a, b) in n1.entries.iter().zip(&n3.entries) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn translates_of_an_entry_stay_in_frame_bounds() {
        // sanity link to the operator layer: time shifts preserve norms
        let dict = gen_split_dict(5);
        let v = &dict.entries[7].vector;
        for tau in 0..5 {
            assert!((time_shift(tau, v).norm() - 1.0).abs() < EPS);
        }
    }
}
