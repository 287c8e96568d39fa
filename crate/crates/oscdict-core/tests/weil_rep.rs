//! Exhaustive operator-level properties over all of SL(2, F_5): unitarity
//! of every image and multiplicativity up to a unimodular scalar.

use num_complex::Complex64;
use oscdict_core::tori::enumerate_sl2;
use oscdict_core::weil::{rho, CMat, CharacterTable};

fn unitary_defect(m: &CMat) -> f64 {
    // max |(M* M - I)_{ij}|
    let n = m.n();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += m.get(k, i).conj() * m.get(k, j);
            }
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

#[test]
fn every_image_is_unitary() {
    let ct = CharacterTable::new(5);
    let group = enumerate_sl2(5);
    assert_eq!(group.len(), 120);
    for g in &group {
        let op = rho(g);
        let defect = unitary_defect(op.as_matrix(&ct));
        assert!(
            defect < 1e-12,
            "non-unitary image of {g:?}: defect {defect:e}"
        );
    }
}

#[test]
fn multiplicative_up_to_unimodular_scalar() {
    // ρ(g)·ρ(h) = c(g,h)·ρ(gh) for a scalar of modulus 1; entrywise
    // agreement after dividing out the scalar must be tight
    let ct = CharacterTable::new(5);
    let group = enumerate_sl2(5);
    let images: Vec<CMat> = group
        .iter()
        .map(|g| rho(g).as_matrix(&ct).clone())
        .collect();
    let index = |g: &oscdict_core::tori::SL2| -> usize {
        group
            .iter()
            .position(|h| h == g)
            .expect("product stays in the group")
    };
    let mut scalars_seen: Vec<Complex64> = Vec::new();
    for (i, g) in group.iter().enumerate() {
        for (j, h) in group.iter().enumerate() {
            let prod = images[i].mul(&images[j]);
            let target = &images[index(&g.mul(h))];
            // pick the largest entry of the target to read off the scalar
            let mut bi = 0;
            let mut bj = 0;
            let mut bm = -1.0f64;
            for a in 0..5 {
                for b in 0..5 {
                    let m = target.get(a, b).norm();
                    if m > bm {
                        bm = m;
                        bi = a;
                        bj = b;
                    }
                }
            }
            let c = prod.get(bi, bj) / target.get(bi, bj);
            assert!(
                (c.norm() - 1.0).abs() < 1e-9,
                "scalar defect is not unimodular for pair ({i},{j})"
            );
            let dev = prod.max_abs_diff(&target.scaled(c));
            assert!(dev < 1e-9, "pair ({i},{j}): deviation {dev:e}");
            if !scalars_seen.iter().any(|s| (s - c).norm() < 1e-6) {
                scalars_seen.push(c);
            }
        }
    }
    // the cocycle is not trivial: both signs occur
    assert!(
        scalars_seen.len() > 1,
        "expected a nontrivial scalar cocycle"
    );
    assert!(scalars_seen
        .iter()
        .any(|s| (s - Complex64::new(1.0, 0.0)).norm() < 1e-6));
}

#[test]
fn torus_generator_images_commute_up_to_scalar() {
    // the image of an abelian subgroup stays abelian modulo the cocycle
    let ct = CharacterTable::new(5);
    let (_, _, gd) = oscdict_core::tori::canonical_torus(5, None).unwrap();
    let a = rho(&gd);
    let am = a.as_matrix(&ct);
    let b = rho(&gd.mul(&gd));
    let bm = b.as_matrix(&ct);
    let ab = am.mul(bm);
    let ba = bm.mul(am);
    let mut s = Complex64::new(0.0, 0.0);
    let mut bm_norm = -1.0f64;
    for i in 0..5 {
        for j in 0..5 {
            if ba.get(i, j).norm() > bm_norm {
                bm_norm = ba.get(i, j).norm();
                s = ab.get(i, j) / ba.get(i, j);
            }
        }
    }
    assert!((s.norm() - 1.0).abs() < 1e-10);
    assert!(ab.max_abs_diff(&ba.scaled(s)) < 1e-10);
}
