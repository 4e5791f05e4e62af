//! Almost split sequences of `𝔘_n`: search, clause-by-clause verification,
//! the resulting quiver with translation, and comparison against the
//! tabulated sequence list and mesh.

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::decompose::{end_radical, find_isomorphism};
use super::{IndecLabel, UnFamily, UnfamError};
use crate::exactcat::{cokernel_rep, deflation_section, is_eps_exact, is_proper_mono, EpsSeq};
use crate::exactla::{Field, Matrix, Subspace};
use crate::rep::{hom_matrices, is_morphism, Morphism, Rep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Clause {
    pub fn passed(&self) -> bool {
        matches!(self, Clause::Pass)
    }

    fn check(ok: bool, why: impl FnOnce() -> String) -> Self {
        if ok {
            Clause::Pass
        } else {
            Clause::Fail(why())
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Pass => write!(f, "pass"),
            Clause::Fail(w) => write!(f, "FAIL ({w})"),
            Clause::Skipped(w) => write!(f, "skipped ({w})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostSplitReport {
    pub exact: Clause,
    pub ends_indecomposable: Clause,
    pub non_split: Clause,
    pub left_almost_split: Clause,
    pub right_almost_split: Clause,
}

impl AlmostSplitReport {
    pub fn passed(&self) -> bool {
        self.clauses().iter().all(|(_, c)| c.passed())
    }

    pub fn clauses(&self) -> [(&'static str, &Clause); 5] {
        [
            ("exact", &self.exact),
            ("ends indecomposable", &self.ends_indecomposable),
            ("non-split", &self.non_split),
            ("left almost split", &self.left_almost_split),
            ("right almost split", &self.right_almost_split),
        ]
    }

    /// The first failing clause, if any.
    pub fn first_failure(&self) -> Option<String> {
        self.clauses()
            .iter()
            .find(|(_, c)| !c.passed())
            .map(|(name, c)| format!("{name}: {c}"))
    }
}

fn flat_span<F: Field>(ms: &[Matrix<F>], field: &F, len: usize) -> Subspace<F> {
    let vecs: Vec<Vec<F::Elem>> = ms.iter().map(|m| m.entries().to_vec()).collect();
    Subspace::from_vectors(field, len, &vecs)
}

/// The family member isomorphic to `v`, with an isomorphism `v → member`.
fn identify_with_iso<F: Field>(fam: &UnFamily<F>, v: &Rep<F>) -> Option<(IndecLabel, Matrix<F>)> {
    let label = fam.identify(v)?;
    let iso = find_isomorphism(v, fam.rep(label).ok()?, &mut ChaCha8Rng::seed_from_u64(0))?;
    Some((label, iso))
}

/// Checks that `X →u Y →v Z` is almost split in the category of
/// representations of the family's poset:
///
/// 1. exact;
/// 2. `X` and `Z` have local end rings;
/// 3. `v` has no section;
/// 4. every non-section `X → M` to an indecomposable `M` factors through `u`;
/// 5. every non-retraction `M → Z` factors through `v`.
///
/// For `M ≅ X` the non-sections are the maps `g ∘ t` with `g` an
/// isomorphism and `t` in the radical of `End(X)`; dually for `Z`.
pub fn verify_almost_split<F: Field>(
    fam: &UnFamily<F>,
    x: &Rep<F>,
    y: &Rep<F>,
    z: &Rep<F>,
    u0: &Matrix<F>,
    v0: &Matrix<F>,
) -> AlmostSplitReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f = fam.field();
    let as_morphism = |a: &Rep<F>, b: &Rep<F>, m: &Matrix<F>, name: &str| match is_morphism(a, b, m) {
        Ok(c) if c.holds() => Ok(Morphism::new(a.clone(), b.clone(), m.clone()).unwrap()),
        Ok(c) => Err(format!("{name} is not a morphism at classes {:?}", c.failing_classes)),
        Err(e) => Err(format!("{name}: {e}")),
    };
    let maps = as_morphism(x, y, u0, "u").and_then(|u| as_morphism(y, z, v0, "v").map(|v| (u, v)));
    let (u, v) = match maps {
        Ok(uv) => uv,
        Err(why) => {
            let skip = || Clause::Skipped("maps are not morphisms".into());
            return AlmostSplitReport {
                exact: Clause::Fail(why),
                ends_indecomposable: skip(),
                non_split: skip(),
                left_almost_split: skip(),
                right_almost_split: skip(),
            };
        }
    };
    let exact = Clause::check(is_eps_exact(&u, &v), || "not exact at V0 or at some class".into());
    let rad_x = end_radical(x, &mut rng);
    let rad_z = end_radical(z, &mut rng);
    let ends_indecomposable = Clause::check(rad_x.is_some() && rad_z.is_some(), || {
        format!("local end ring: X {}, Z {}", rad_x.is_some(), rad_z.is_some())
    });
    let non_split = if exact.passed() {
        Clause::check(deflation_section(&v).is_none(), || "v has a section".into())
    } else {
        Clause::Skipped("sequence is not exact".into())
    };

    let left_almost_split = match (&rad_x, identify_with_iso(fam, x)) {
        (Some(rad), Some((xl, g))) => {
            let mut result = Clause::Pass;
            for (ml, m) in fam.members() {
                let required: Vec<Matrix<F>> = if ml == xl {
                    rad.iter().map(|t| g.mul(t)).collect()
                } else {
                    hom_matrices(x, m).unwrap()
                };
                if required.is_empty() {
                    continue;
                }
                let through: Vec<Matrix<F>> = hom_matrices(y, m).unwrap().iter().map(|w| w.mul(u0)).collect();
                let span = flat_span(&through, f, m.d0() * x.d0());
                if !required.iter().all(|r| span.contains(r.entries())) {
                    result = Clause::Fail(format!("a map X -> {ml} does not factor through u"));
                    break;
                }
            }
            result
        }
        _ => Clause::Skipped("X is not a known indecomposable".into()),
    };

    let right_almost_split = match (&rad_z, identify_with_iso(fam, z)) {
        (Some(rad), Some((zl, g))) => {
            let h = g.inverse().expect("isomorphism");
            let mut result = Clause::Pass;
            for (ml, m) in fam.members() {
                let required: Vec<Matrix<F>> = if ml == zl {
                    rad.iter().map(|t| t.mul(&h)).collect()
                } else {
                    hom_matrices(m, z).unwrap()
                };
                if required.is_empty() {
                    continue;
                }
                let through: Vec<Matrix<F>> = hom_matrices(m, y).unwrap().iter().map(|k| v0.mul(k)).collect();
                let span = flat_span(&through, f, z.d0() * m.d0());
                if !required.iter().all(|r| span.contains(r.entries())) {
                    result = Clause::Fail(format!("a map {ml} -> Z does not factor through v"));
                    break;
                }
            }
            result
        }
        _ => Clause::Skipped("Z is not a known indecomposable".into()),
    };

    AlmostSplitReport { exact, ends_indecomposable, non_split, left_almost_split, right_almost_split }
}

pub fn verify_seq<F: Field>(fam: &UnFamily<F>, seq: &EpsSeq<F>) -> AlmostSplitReport {
    verify_almost_split(fam, seq.left(), seq.middle(), seq.right(), seq.u.matrix(), seq.v.matrix())
}

/// A verified almost split sequence between family members.
#[derive(Clone, Debug)]
pub struct AlmostSplit<F: Field> {
    pub x: IndecLabel,
    pub y: IndecLabel,
    pub z: IndecLabel,
    pub seq: EpsSeq<F>,
    pub report: AlmostSplitReport,
}

impl<F: Field> AlmostSplit<F> {
    pub fn labels(&self) -> (IndecLabel, IndecLabel, IndecLabel) {
        (self.x, self.y, self.z)
    }
}

fn candidate_maps<F: Field>(f: &F, basis: &[Matrix<F>]) -> Vec<Matrix<F>> {
    let mut out = basis.to_vec();
    let minus_one = f.neg(&f.one());
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            out.push(basis[i].add(&basis[j]));
            out.push(basis[i].add(&basis[j].scale(&minus_one)));
        }
    }
    out
}

/// For every non-injective member `X`, searches middle terms `Y` among the
/// members and inflations `u` among Hom basis elements and their pairwise
/// sums and differences, keeping `(u, coker u)` when it verifies. Exactly one
/// sequence per non-injective member is expected.
pub fn compute_almost_split<F: Field>(fam: &UnFamily<F>) -> Result<Vec<AlmostSplit<F>>, UnfamError> {
    let mut out = Vec::new();
    let mut problems = Vec::new();
    let mut non_injective = 0;
    for &xl in fam.labels() {
        if fam.is_injective(xl)? {
            continue;
        }
        non_injective += 1;
        let x = fam.rep(xl)?;
        let mut found: Vec<AlmostSplit<F>> = Vec::new();
        for &yl in fam.labels() {
            let y = fam.rep(yl)?;
            if y.d0() <= x.d0() {
                continue;
            }
            for u0 in candidate_maps(fam.field(), &hom_matrices(x, y)?) {
                let u = Morphism::new(x.clone(), y.clone(), u0)?;
                if !is_proper_mono(&u) {
                    continue;
                }
                let (zc, vc) = cokernel_rep(&u)?;
                let Some((zl, g)) = identify_with_iso(fam, &zc) else { continue };
                let z = fam.rep(zl)?;
                let v = Morphism::new(y.clone(), z.clone(), g.mul(vc.matrix()))?;
                let seq = EpsSeq::new(u, v)?;
                let report = verify_seq(fam, &seq);
                if report.passed() {
                    found.push(AlmostSplit { x: xl, y: yl, z: zl, seq, report });
                    break;
                }
            }
        }
        if found.len() != 1 {
            let ys: Vec<String> = found.iter().map(|a| a.y.to_string()).collect();
            problems.push(format!("{xl}: {} candidates {ys:?}", found.len()));
        }
        out.extend(found);
    }
    if !problems.is_empty() || out.len() != 2 * fam.n() || out.len() != non_injective {
        return Err(UnfamError::VerificationIncomplete {
            expected: 2 * fam.n(),
            found: out.len(),
            detail: problems.join("; "),
        });
    }
    Ok(out)
}

/// Vertices, irreducible maps and translation of the category.
#[derive(Clone, Debug)]
pub struct ArQuiver<F: Field> {
    pub n: usize,
    pub vertices: Vec<IndecLabel>,
    pub arrows: Vec<(IndecLabel, IndecLabel)>,
    /// `(Z, τZ)` for every sequence `τZ → Y → Z`.
    pub tau: Vec<(IndecLabel, IndecLabel)>,
    pub sequences: Vec<AlmostSplit<F>>,
    pub projectives: Vec<IndecLabel>,
    pub injectives: Vec<IndecLabel>,
}

impl<F: Field> ArQuiver<F> {
    pub fn tau_of(&self, z: IndecLabel) -> Option<IndecLabel> {
        self.tau.iter().find(|(a, _)| *a == z).map(|&(_, x)| x)
    }

    /// `τ` is a bijection from non-projective to non-injective vertices.
    pub fn tau_is_bijection(&self) -> bool {
        let dom: BTreeSet<_> = self.tau.iter().map(|&(z, _)| z).collect();
        let img: BTreeSet<_> = self.tau.iter().map(|&(_, x)| x).collect();
        let nonproj: BTreeSet<_> = self.vertices.iter().copied().filter(|v| !self.projectives.contains(v)).collect();
        let noninj: BTreeSet<_> = self.vertices.iter().copied().filter(|v| !self.injectives.contains(v)).collect();
        dom.len() == self.tau.len() && img.len() == self.tau.len() && dom == nonproj && img == noninj
    }

    /// `(in-arrows, out-arrows)` at a vertex.
    pub fn degree(&self, v: IndecLabel) -> (Vec<IndecLabel>, Vec<IndecLabel>) {
        let ins = self.arrows.iter().filter(|a| a.1 == v).map(|a| a.0).collect();
        let outs = self.arrows.iter().filter(|a| a.0 == v).map(|a| a.1).collect();
        (ins, outs)
    }
}

pub fn ar_quiver<F: Field>(fam: &UnFamily<F>) -> Result<ArQuiver<F>, UnfamError> {
    let sequences = compute_almost_split(fam)?;
    let mut arrows = BTreeSet::new();
    let mut tau = Vec::new();
    for s in &sequences {
        arrows.insert((s.x, s.y));
        arrows.insert((s.y, s.z));
        tau.push((s.z, s.x));
    }
    tau.sort();
    let mut projectives = Vec::new();
    let mut injectives = Vec::new();
    for &l in fam.labels() {
        if fam.is_projective(l)? {
            projectives.push(l);
        }
        if fam.is_injective(l)? {
            injectives.push(l);
        }
    }
    Ok(ArQuiver {
        n: fam.n(),
        vertices: fam.labels().to_vec(),
        arrows: arrows.into_iter().collect(),
        tau,
        sequences,
        projectives,
        injectives,
    })
}

/// A sequence from the tabulated list: both maps are `(0,1)ᵗ` and `(1,0)`.
#[derive(Clone, Debug)]
pub struct ReferenceSeq {
    pub x: IndecLabel,
    pub y: IndecLabel,
    pub z: IndecLabel,
}

/// The tabulated list, with its original indices:
/// `(L1_1, L3_1, L1_1)`, `(L1_i, L3_{i-1}, L2_i)` for `2 ≤ i ≤ n`,
/// `(L2_i, L3_{i+1}, L1_i)` for `1 ≤ i < n`, and `(S, L3_n, L2_n)`.
pub fn reference_sequences(n: usize) -> Vec<ReferenceSeq> {
    use IndecLabel::*;
    let mut v = vec![ReferenceSeq { x: L1(1), y: L3(1), z: L1(1) }];
    v.extend((2..=n).map(|i| ReferenceSeq { x: L1(i), y: L3(i - 1), z: L2(i) }));
    v.extend((1..n).map(|i| ReferenceSeq { x: L2(i), y: L3(i + 1), z: L1(i) }));
    v.push(ReferenceSeq { x: S, y: L3(n), z: L2(n) });
    v
}

#[derive(Clone, Debug)]
pub struct ReferenceReport {
    /// Tabulated triples that differ from the computed sequence with the
    /// same left end.
    pub label_discrepancies: Vec<String>,
    /// Tabulated sequences whose printed maps fail verification.
    pub map_discrepancies: Vec<String>,
    pub reports: Vec<(ReferenceSeq, AlmostSplitReport)>,
}

impl ReferenceReport {
    pub fn all_verified(&self) -> bool {
        self.reports.iter().all(|(_, r)| r.passed())
    }
}

/// Verifies each tabulated sequence with its printed maps and compares its
/// labels with the computed sequences.
pub fn reference_sequence_report<F: Field>(fam: &UnFamily<F>, computed: &[AlmostSplit<F>]) -> Result<ReferenceReport, UnfamError> {
    let f = fam.field();
    let (zero, one) = (f.zero(), f.one());
    let mut label_discrepancies = Vec::new();
    let mut map_discrepancies = Vec::new();
    let mut reports = Vec::new();
    for r in reference_sequences(fam.n()) {
        let (x, y, z) = (fam.rep(r.x)?, fam.rep(r.y)?, fam.rep(r.z)?);
        let u0 = Matrix::from_rows(f, vec![vec![zero.clone()], vec![one.clone()]])
            .unwrap()
            .select_rows(&(0..y.d0().min(2)).collect::<Vec<_>>());
        let v0 = Matrix::from_rows(f, vec![vec![one.clone(), zero.clone()]]).unwrap();
        let report = if u0.shape() == (y.d0(), x.d0()) && v0.shape() == (z.d0(), y.d0()) {
            verify_almost_split(fam, x, y, z, &u0, &v0)
        } else {
            let skip = || Clause::Skipped("shape mismatch".into());
            AlmostSplitReport {
                exact: Clause::Fail("printed maps have the wrong shape".into()),
                ends_indecomposable: skip(),
                non_split: skip(),
                left_almost_split: skip(),
                right_almost_split: skip(),
            }
        };
        let triple = format!("({}, {}, {})", r.x, r.y, r.z);
        match computed.iter().find(|c| c.x == r.x) {
            Some(c) if (c.y, c.z) != (r.y, r.z) => label_discrepancies.push(format!(
                "listed {triple}; computed ({}, {}, {})",
                c.x, c.y, c.z
            )),
            None => label_discrepancies.push(format!("listed {triple}; no computed sequence starts at {}", r.x)),
            _ => {}
        }
        if let Some(why) = report.first_failure() {
            map_discrepancies.push(format!("listed {triple} with u = (0,1)^t, v = (1,0): {why}"));
        }
        reports.push((r, report));
    }
    Ok(ReferenceReport { label_discrepancies, map_discrepancies, reports })
}

/// The arrows of the drawn mesh, continuing its first rows:
/// `L1_1 ⇄ L3_1`; for `1 ≤ i < n`, `L1_{i+1} → L3_i → L2_i → L3_{i+1} → L1_{i+1}`;
/// and `S → L3_n → L2_n`.
pub fn reference_mesh_arrows(n: usize) -> Vec<(IndecLabel, IndecLabel)> {
    use IndecLabel::*;
    let mut a = BTreeSet::new();
    a.insert((L1(1), L3(1)));
    a.insert((L3(1), L1(1)));
    for i in 1..n {
        a.insert((L1(i + 1), L3(i)));
        a.insert((L3(i), L2(i)));
        a.insert((L2(i), L3(i + 1)));
        a.insert((L3(i + 1), L1(i + 1)));
    }
    a.insert((S, L3(n)));
    a.insert((L3(n), L2(n)));
    a.into_iter().collect()
}

/// Arrows present in only one of the computed quiver and the drawn mesh.
pub fn mesh_discrepancies<F: Field>(q: &ArQuiver<F>) -> Vec<String> {
    let drawn: BTreeSet<_> = reference_mesh_arrows(q.n).into_iter().collect();
    let computed: BTreeSet<_> = q.arrows.iter().copied().collect();
    let mut out: Vec<String> = drawn
        .difference(&computed)
        .map(|(a, b)| format!("drawn arrow {a} -> {b} not computed"))
        .collect();
    out.extend(computed.difference(&drawn).map(|(a, b)| format!("computed arrow {a} -> {b} not drawn")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::PrimeField;
    use crate::rep::direct_sum;
    use IndecLabel::*;

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn sequences_for_n1_and_n2() {
        let fam = UnFamily::new(1, gf()).unwrap();
        let seqs = compute_almost_split(&fam).unwrap();
        let triples: Vec<_> = seqs.iter().map(AlmostSplit::labels).collect();
        assert_eq!(triples, vec![(S, L3(1), L2(1)), (L1(1), L3(1), L1(1))]);

        let fam = UnFamily::new(2, gf()).unwrap();
        let mut triples: Vec<_> = compute_almost_split(&fam).unwrap().iter().map(AlmostSplit::labels).collect();
        triples.sort();
        assert_eq!(
            triples,
            vec![(S, L3(2), L2(2)), (L1(1), L3(1), L1(1)), (L1(2), L3(1), L2(1)), (L2(1), L3(2), L1(2))]
        );
    }

    #[test]
    fn split_and_zero_sequences_fail() {
        let fam = UnFamily::new(2, gf()).unwrap();
        let (a, b) = (fam.rep(L1(1)).unwrap(), fam.rep(L2(2)).unwrap());
        let ds = direct_sum(a, b).unwrap();
        let r = verify_almost_split(
            &fam,
            a,
            &ds.sum,
            b,
            ds.inclusions[0].matrix(),
            ds.projections[1].matrix(),
        );
        assert!(r.exact.passed() && !r.non_split.passed());

        let (x, y) = (fam.rep(L1(1)).unwrap(), fam.rep(L3(1)).unwrap());
        let r = verify_almost_split(
            &fam,
            x,
            y,
            x,
            &Matrix::zeros(&gf(), 2, 1),
            &Matrix::from_ints(&gf(), &[&[0, 1]]),
        );
        assert!(!r.exact.passed());
    }

    #[test]
    fn listed_maps_and_labels_are_compared() {
        let fam = UnFamily::new(1, gf()).unwrap();
        let seqs = compute_almost_split(&fam).unwrap();
        let rep = reference_sequence_report(&fam, &seqs).unwrap();
        assert!(rep.label_discrepancies.is_empty());
        assert_eq!(rep.map_discrepancies.len(), 1);

        let fam = UnFamily::new(3, gf()).unwrap();
        let q = ar_quiver(&fam).unwrap();
        let rep = reference_sequence_report(&fam, &q.sequences).unwrap();
        assert!(!rep.label_discrepancies.is_empty());
        assert!(mesh_discrepancies(&q).is_empty());
        assert!(q.tau_is_bijection());
        assert_eq!(q.arrows.len(), 12);
        assert_eq!(q.tau_of(L2(3)), Some(S));
    }
}
