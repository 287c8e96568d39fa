//! Property verification: ambiguity-function statistics and structural
//! invariants, reported per check as pass/fail with the worst observed
//! value and where it occurred. Bound violations are findings, not
//! panics — the caller decides what a red check means.

use crate::dict::{DictKind, Dictionary, Kind, RepParams};
use crate::tori::build_gd;
use crate::weil::{dft, rho, CVec, CharacterTable};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A(τ,ω) = Σ_t φ(t)·conj(χ(ωt)·ψ(t+τ)), evaluated directly in O(p).
pub fn ambiguity(ct: &CharacterTable, phi: &CVec, psi: &CVec, tau: u64, omega: u64) -> Complex64 {
    let p = ct.p();
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..p {
        let m = ct.chi(omega % p * t % p) * psi.entries[((t + tau) % p) as usize];
        acc += phi.entries[t as usize] * m.conj();
    }
    acc
}

/// The full p×p ambiguity surface of a pair, rows indexed by τ. Each row is
/// one transform: with u_τ(t) = φ(t)·conj(ψ(t+τ)),
/// A(τ,·) = √p·conj(F(conj(u_τ))), so the surface costs O(p³) rather than
/// the O(p⁴) of pointwise evaluation.
pub struct AmbiguitySurface {
    p: u64,
    values: Vec<Complex64>,
}

impl AmbiguitySurface {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, tau: u64, omega: u64) -> Complex64 {
        self.values[(tau * self.p + omega) as usize]
    }

    /// (max |A|, τ, ω) over the whole surface.
    pub fn max_all(&self) -> (f64, u64, u64) {
        self.scan(|_, _| true)
    }

    /// (max |A|, τ, ω) over (τ, ω) ≠ (0, 0).
    pub fn max_off_origin(&self) -> (f64, u64, u64) {
        self.scan(|tau, omega| tau != 0 || omega != 0)
    }

    fn scan(&self, keep: impl Fn(u64, u64) -> bool) -> (f64, u64, u64) {
        let mut best = (-1.0, 0, 0);
        for tau in 0..self.p {
            for omega in 0..self.p {
                if !keep(tau, omega) {
                    continue;
                }
                let m = self.get(tau, omega).norm();
                if m > best.0 {
                    best = (m, tau, omega);
                }
            }
        }
        (best.0.max(0.0), best.1, best.2)
    }
}

pub fn ambiguity_surface(ct: &CharacterTable, phi: &CVec, psi: &CVec) -> AmbiguitySurface {
    let p = ct.p();
    let root_p = libm::sqrt(p as f64);
    let mut values = Vec::with_capacity((p * p) as usize);
    for tau in 0..p {
        let u_conj = CVec::new(
            (0..p)
                .map(|t| {
                    (phi.entries[t as usize] * psi.entries[((t + tau) % p) as usize].conj()).conj()
                })
                .collect(),
        );
        let row = dft(ct, &u_conj);
        values.extend(row.entries.iter().map(|z| z.conj() * root_p));
    }
    AmbiguitySurface { p, values }
}

// ---- check reports ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
        }
    }
}

/// Where the worst value of a check was observed. Fields that do not apply
/// to a given check stay None.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Location {
    pub entry: Option<usize>,
    pub entry2: Option<usize>,
    pub tau: Option<u64>,
    pub omega: Option<u64>,
    /// Coordinate index, for per-coordinate checks.
    pub t: Option<u64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub status: CheckStatus,
    pub worst_value: f64,
    pub worst_location: Location,
    pub tolerance: f64,
    pub count_checked: u64,
}

/// The outcome of a verification run: one report per executed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }
}

/// Knobs shared by the checks; see the individual check functions for how
/// each one uses them.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOpts {
    pub tol: f64,
    pub sample_limit: u64,
    pub seed: u64,
}

impl Default for VerifyOpts {
    fn default() -> Self {
        VerifyOpts {
            tol: 1e-8,
            sample_limit: 100_000,
            seed: 0,
        }
    }
}

/// Selector for the individual checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckId {
    Autocorrelation,
    Crosscorrelation,
    Supremum,
    Fourier,
    Structure,
}

impl CheckId {
    pub const ALL: [CheckId; 5] = [
        CheckId::Autocorrelation,
        CheckId::Crosscorrelation,
        CheckId::Supremum,
        CheckId::Fourier,
        CheckId::Structure,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckId::Autocorrelation => "autocorrelation",
            CheckId::Crosscorrelation => "crosscorrelation",
            CheckId::Supremum => "supremum",
            CheckId::Fourier => "fourier",
            CheckId::Structure => "structure",
        }
    }

    pub fn parse(s: &str) -> Option<CheckId> {
        CheckId::ALL.iter().copied().find(|c| c.name() == s)
    }
}

/// Autocorrelation: every entry must satisfy |A(τ,ω)| ≤ 2/√p + tol away
/// from the origin and A(0,0) = 1 within tol. The worst off-origin modulus
/// across the dictionary is reported even when it stays inside the bound.
pub fn check_autocorrelation(ct: &CharacterTable, dict: &Dictionary, tol: f64) -> CheckReport {
    auto_check_over(ct, dict, tol, "autocorrelation", |_| true)
}

/// The same scan restricted to the quadratic-character row x = (p-1)/2,
/// whose vectors ride the boundary of the split construction; surfaced as
/// a separate statistic. None when the dictionary has no split entries.
pub fn sigma_row_statistic(
    ct: &CharacterTable,
    dict: &Dictionary,
    tol: f64,
) -> Option<CheckReport> {
    let x_sigma = (dict.p - 1) / 2;
    let any = dict
        .entries
        .iter()
        .any(|e| e.kind == Kind::Split && e.char_index == x_sigma);
    if !any {
        return None;
    }
    Some(auto_check_over(
        ct,
        dict,
        tol,
        "autocorrelation_sigma_row",
        |e| dict.entries[e].kind == Kind::Split && dict.entries[e].char_index == x_sigma,
    ))
}

fn auto_check_over(
    ct: &CharacterTable,
    dict: &Dictionary,
    tol: f64,
    name: &'static str,
    include: impl Fn(usize) -> bool,
) -> CheckReport {
    let p = dict.p;
    let bound = 2.0 / libm::sqrt(p as f64) + tol;
    let mut worst = CheckReport {
        name,
        status: CheckStatus::Pass,
        worst_value: 0.0,
        worst_location: Location::default(),
        tolerance: tol,
        count_checked: 0,
    };
    let mut origin_bad: Option<(usize, f64)> = None;
    for (i, e) in dict.entries.iter().enumerate() {
        if !include(i) {
            continue;
        }
        let surf = ambiguity_surface(ct, &e.vector, &e.vector);
        worst.count_checked += p * p;
        let (m, tau, omega) = surf.max_off_origin();
        if m > worst.worst_value {
            worst.worst_value = m;
            worst.worst_location = Location {
                entry: Some(i),
                tau: Some(tau),
                omega: Some(omega),
                ..Location::default()
            };
        }
        let origin_dev = (surf.get(0, 0) - Complex64::new(1.0, 0.0)).norm();
        if origin_dev > tol && origin_bad.is_none_or(|(_, d)| origin_dev > d) {
            origin_bad = Some((i, origin_dev));
        }
    }
    if worst.worst_value > bound {
        worst.status = CheckStatus::Fail;
    }
    if let Some((i, dev)) = origin_bad {
        worst.status = CheckStatus::Fail;
        worst.worst_location.note = Some(format!("origin deviates by {dev:e} at entry {i}"));
    }
    worst
}

/// Crosscorrelation: |A(τ,ω)| ≤ 4/√p + tol at every point of the surface
/// for distinct pairs. All C(n,2) pairs when that fits in sample_limit,
/// otherwise sample_limit seeded draws.
pub fn check_crosscorrelation(
    ct: &CharacterTable,
    dict: &Dictionary,
    opts: &VerifyOpts,
) -> CheckReport {
    let p = dict.p;
    let n = dict.entries.len();
    let bound = 4.0 / libm::sqrt(p as f64) + opts.tol;
    let mut worst = CheckReport {
        name: "crosscorrelation",
        status: CheckStatus::Pass,
        worst_value: 0.0,
        worst_location: Location::default(),
        tolerance: opts.tol,
        count_checked: 0,
    };
    let consider = |i: usize, j: usize, worst: &mut CheckReport| {
        let surf = ambiguity_surface(ct, &dict.entries[i].vector, &dict.entries[j].vector);
        let (m, tau, omega) = surf.max_all();
        worst.count_checked += 1;
        if m > worst.worst_value {
            worst.worst_value = m;
            worst.worst_location = Location {
                entry: Some(i),
                entry2: Some(j),
                tau: Some(tau),
                omega: Some(omega),
                ..Location::default()
            };
        }
    };
    let total_pairs = n as u64 * (n as u64 - 1) / 2;
    if total_pairs <= opts.sample_limit {
        for i in 0..n {
            for j in i + 1..n {
                consider(i, j, &mut worst);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let draw = |bound: usize, rng: &mut ChaCha8Rng| {
            // unbiased-enough widening multiply onto 0..bound
            ((rng.next_u64() as u128 * bound as u128) >> 64) as usize
        };
        for _ in 0..opts.sample_limit {
            let i = draw(n, &mut rng);
            let mut j = draw(n - 1, &mut rng);
            if j >= i {
                j += 1;
            }
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            consider(i, j, &mut worst);
        }
    }
    if worst.worst_value > bound {
        worst.status = CheckStatus::Fail;
    }
    worst
}

/// Supremum: every coordinate of every entry must satisfy
/// |φ(t)| ≤ 2/√p + tol — the flatness property of the construction.
pub fn check_supremum(dict: &Dictionary, tol: f64) -> CheckReport {
    let p = dict.p;
    let bound = 2.0 / libm::sqrt(p as f64) + tol;
    let mut worst = CheckReport {
        name: "supremum",
        status: CheckStatus::Pass,
        worst_value: 0.0,
        worst_location: Location::default(),
        tolerance: tol,
        count_checked: 0,
    };
    for (i, e) in dict.entries.iter().enumerate() {
        for (t, z) in e.vector.entries.iter().enumerate() {
            worst.count_checked += 1;
            let m = z.norm();
            if m > worst.worst_value {
                worst.worst_value = m;
                worst.worst_location = Location {
                    entry: Some(i),
                    t: Some(t as u64),
                    ..Location::default()
                };
            }
        }
    }
    if worst.worst_value > bound {
        worst.status = CheckStatus::Fail;
    }
    worst
}

/// Fourier invariance: within each family, the transform of every member
/// must land on some member (up to phase), and the induced map must be a
/// bijection. worst_value is the weakest best-match overlap.
pub fn check_fourier_invariance(ct: &CharacterTable, dict: &Dictionary, tol: f64) -> CheckReport {
    let mut worst = CheckReport {
        name: "fourier_invariance",
        status: CheckStatus::Pass,
        worst_value: 1.0,
        worst_location: Location::default(),
        tolerance: tol,
        count_checked: 0,
    };
    for family in [Kind::Split, Kind::Nonsplit] {
        let members: Vec<usize> = (0..dict.entries.len())
            .filter(|&i| dict.entries[i].kind == family)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut assigned = alloc::vec![false; members.len()];
        for &i in &members {
            let image = dft(ct, &dict.entries[i].vector);
            let mut best = (0.0f64, usize::MAX);
            for (slot, &j) in members.iter().enumerate() {
                let overlap = image.inner(&dict.entries[j].vector).norm();
                if overlap > best.0 {
                    best = (overlap, slot);
                }
            }
            worst.count_checked += 1;
            if best.0 < worst.worst_value {
                worst.worst_value = best.0;
                worst.worst_location = Location {
                    entry: Some(i),
                    entry2: Some(members[best.1]),
                    ..Location::default()
                };
            }
            if assigned[best.1] {
                worst.status = CheckStatus::Fail;
                worst.worst_location.note = Some(format!(
                    "entry {} matched twice under the transform",
                    members[best.1]
                ));
            }
            assigned[best.1] = true;
        }
    }
    if worst.worst_value < 1.0 - tol {
        worst.status = CheckStatus::Fail;
    }
    worst
}

/// Structural invariants: family sizes, unit norms, canonical phases,
/// per-representative orthonormality, eigenvector residuals for nonsplit
/// entries, and |c| = 1 for the recorded torus scalar. The note on a
/// failure names the first violated invariant.
pub fn check_structure(ct: &CharacterTable, dict: &Dictionary) -> CheckReport {
    let p = dict.p;
    let mut worst = CheckReport {
        name: "structure",
        status: CheckStatus::Pass,
        worst_value: 0.0,
        worst_location: Location::default(),
        tolerance: 1e-8,
        count_checked: 0,
    };
    let fail = |worst: &mut CheckReport, value: f64, entry: Option<usize>, note: String| {
        worst.status = CheckStatus::Fail;
        if value > worst.worst_value || worst.worst_location.note.is_none() {
            worst.worst_value = worst.worst_value.max(value);
            worst.worst_location = Location {
                entry,
                note: Some(note),
                ..Location::default()
            };
        }
    };

    // family sizes
    let split_count = dict
        .entries
        .iter()
        .filter(|e| e.kind == Kind::Split)
        .count() as u64;
    let ns_count = dict.entries.len() as u64 - split_count;
    let want_split = p * (p + 1) * (p - 2) / 2;
    let want_ns = p * p * (p - 1) / 2;
    let (expect_split, expect_ns) = match dict.kind {
        DictKind::Split => (want_split, 0),
        DictKind::Nonsplit => (0, want_ns),
        DictKind::Both => (want_split, want_ns),
    };
    if split_count != expect_split || ns_count != expect_ns {
        fail(
            &mut worst,
            0.0,
            None,
            format!(
                "family sizes {split_count}+{ns_count} differ from expected {expect_split}+{expect_ns}"
            ),
        );
    }
    worst.count_checked += 1;

    // per-entry invariants; an all-zero vector is diagnosed as such rather
    // than as a norm deviation
    for (i, e) in dict.entries.iter().enumerate() {
        worst.count_checked += 1;
        let Some(lead) = e.vector.entries.iter().find(|z| z.norm() > 1e-12) else {
            fail(&mut worst, 1.0, Some(i), String::from("zero vector"));
            continue;
        };
        let norm_dev = (e.vector.norm() - 1.0).abs();
        if norm_dev > 1e-10 {
            fail(
                &mut worst,
                norm_dev,
                Some(i),
                format!("norm deviates by {norm_dev:e}"),
            );
        }
        if !(lead.re > 0.0 && lead.im.abs() <= 1e-10) {
            fail(
                &mut worst,
                lead.im.abs(),
                Some(i),
                String::from("leading entry is not canonically phased"),
            );
        }
    }

    // per-representative orthonormality
    let mut reps: Vec<RepParams> = Vec::new();
    for e in &dict.entries {
        if !reps.contains(&e.rep) {
            reps.push(e.rep);
        }
    }
    for rep in reps {
        let members: Vec<usize> = (0..dict.entries.len())
            .filter(|&i| dict.entries[i].rep == rep)
            .collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in members.iter().skip(a + 1) {
                worst.count_checked += 1;
                let g = dict.entries[i].vector.inner(&dict.entries[j].vector).norm();
                if g > 1e-9 {
                    fail(
                        &mut worst,
                        g,
                        Some(i),
                        format!("entries {i},{j} share a representative but overlap by {g:e}"),
                    );
                }
            }
        }
    }

    // nonsplit entries are eigenvectors of their conjugated torus generator
    if ns_count > 0 {
        match (dict.d, dict.st) {
            (Some(d), Some((s, t))) => match build_gd(
                p,
                crate::field::FpElem::new(d, p),
                crate::field::FpElem::new(s, p),
                crate::field::FpElem::new(t, p),
            ) {
                Ok(gd) => {
                    for (i, e) in dict.entries.iter().enumerate() {
                        let RepParams::Nonsplit { a, c, w } = e.rep else {
                            continue;
                        };
                        worst.count_checked += 1;
                        let ainv = crate::field::FpElem::new(a, p).inv().value();
                        let mut g = crate::tori::SL2::from_values(a, 0, c, ainv, p);
                        if w {
                            g = g.mul(&crate::tori::SL2::w(p));
                        }
                        let h = g.mul(&gd).mul(&g.inv());
                        let image = rho(&h).apply(ct, &e.vector);
                        // phase-free residual: subtract the projection onto
                        // v rather than differencing norms, which would lose
                        // half the significand to cancellation
                        let coeff = image.inner(&e.vector);
                        let resid = libm::sqrt(
                            image
                                .entries
                                .iter()
                                .zip(&e.vector.entries)
                                .map(|(a, b)| (a - coeff * b).norm_sqr())
                                .sum::<f64>(),
                        );
                        if resid > 1e-8 {
                            fail(
                                &mut worst,
                                resid,
                                Some(i),
                                format!("eigenvector residual {resid:e}"),
                            );
                        }
                    }
                }
                Err(_) => fail(
                    &mut worst,
                    0.0,
                    None,
                    String::from("recorded (d, s, t) do not generate a torus"),
                ),
            },
            _ => fail(
                &mut worst,
                0.0,
                None,
                String::from("nonsplit entries present but torus metadata missing"),
            ),
        }
    }

    if let Some(c) = dict.c_scalar {
        worst.count_checked += 1;
        let dev = (c.norm() - 1.0).abs();
        if dev > 1e-9 {
            fail(
                &mut worst,
                dev,
                None,
                format!("|c| deviates from 1 by {dev:e}"),
            );
        }
    }

    worst
}

/// Run the selected checks in canonical order. The σ-row statistic rides
/// along with autocorrelation whenever split entries are present.
pub fn run_checks(
    ct: &CharacterTable,
    dict: &Dictionary,
    opts: &VerifyOpts,
    ids: &[CheckId],
) -> Report {
    let mut checks = Vec::new();
    for id in CheckId::ALL {
        if !ids.contains(&id) {
            continue;
        }
        match id {
            CheckId::Autocorrelation => {
                checks.push(check_autocorrelation(ct, dict, opts.tol));
                if let Some(r) = sigma_row_statistic(ct, dict, opts.tol) {
                    checks.push(r);
                }
            }
            CheckId::Crosscorrelation => checks.push(check_crosscorrelation(ct, dict, opts)),
            CheckId::Supremum => checks.push(check_supremum(dict, opts.tol)),
            CheckId::Fourier => checks.push(check_fourier_invariance(ct, dict, opts.tol)),
            CheckId::Structure => checks.push(check_structure(ct, dict)),
        }
    }
    Report { checks }
}

/// Seeded pseudo-random unit vectors in C(F_p) — the negative controls.
/// Complex-gaussian entries via Box–Muller on ChaCha8 output, normalized.
pub fn seeded_unit_vectors(p: u64, n: usize, seed: u64) -> Vec<CVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = move || {
        // (0, 1]: never feeds log a zero
        ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    };
    (0..n)
        .map(|_| {
            let entries: Vec<Complex64> = (0..p)
                .map(|_| {
                    let r = libm::sqrt(-2.0 * libm::log(uniform()));
                    let th = TAU * uniform();
                    Complex64::new(r * libm::cos(th), r * libm::sin(th))
                })
                .collect();
            let v = CVec::new(entries);
            let norm = v.norm();
            v.scaled(Complex64::new(1.0 / norm, 0.0))
        })
        .collect()
}
