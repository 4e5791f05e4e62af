//! The chain family `𝔘_n`: its indecomposables `S`, `L1(i)`, `L2(i)`,
//! `L3(i)`, Hom tables, multiplicities, decomposition, almost split
//! sequences and the infinite-level truncation model.

mod almost_split;
mod decompose;
mod infinite;

pub use almost_split::{
    ar_quiver, compute_almost_split, mesh_discrepancies, reference_mesh_arrows, reference_sequence_report,
    reference_sequences, verify_almost_split, verify_seq, AlmostSplit, AlmostSplitReport, ArQuiver, Clause,
    ReferenceReport, ReferenceSeq,
};
pub use decompose::{decompose, decompose_with, end_radical, find_isomorphism, is_isomorphic, Decomposition, Part};
pub use infinite::{infinite_almost_split, label_after_extension, theta, xi, InfRep, InfiniteCertificate};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactcat::ExactError;
use crate::exactla::{Field, Matrix, Rationals};
use crate::poset::{PosetError, PosetInv, UnShape};
use crate::projinj::{dual_presentation_splits, presentation_splits, ProjInjError};
use crate::rep::{hom_dim, Rep, RepError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfamError {
    #[error("label {0} is out of range for n = {1}")]
    IndexOutOfRange(String, usize),
    #[error("poset is not of the chain family shape")]
    NotChainFamily,
    #[error("Hom-dimension matrix of the indecomposables is singular")]
    SingularHomMatrix,
    #[error("multiplicities are not non-negative integers: {0}")]
    NotInFamily(String),
    #[error("expected {expected} almost split sequences, verified {found}: {detail}")]
    VerificationIncomplete { expected: usize, found: usize, detail: String },
    #[error("target level {target} is below level {level}")]
    TargetBelowLevel { target: usize, level: usize },
    #[error("sequence starts at the trivial representation")]
    TrivialLeftEnd,
    #[error("cannot parse label {0:?}")]
    BadLabel(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    ProjInj(#[from] ProjInjError),
}

/// An indecomposable of `𝔘_n`. Ordered `S < L1(·) < L2(·) < L3(·)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndecLabel {
    S,
    L1(usize),
    L2(usize),
    L3(usize),
}

impl IndecLabel {
    pub fn index(&self) -> Option<usize> {
        match *self {
            IndecLabel::S => None,
            IndecLabel::L1(i) | IndecLabel::L2(i) | IndecLabel::L3(i) => Some(i),
        }
    }

    pub fn valid_for(&self, n: usize) -> bool {
        self.index().is_none_or(|i| (1..=n).contains(&i))
    }

    /// `"S"` or e.g. `"L3_1"`.
    pub fn node_id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for IndecLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IndecLabel::S => write!(f, "S"),
            IndecLabel::L1(i) => write!(f, "L1_{i}"),
            IndecLabel::L2(i) => write!(f, "L2_{i}"),
            IndecLabel::L3(i) => write!(f, "L3_{i}"),
        }
    }
}

impl FromStr for IndecLabel {
    type Err = UnfamError;

    /// Accepts `S`, `L3_1` and `L3(1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UnfamError::BadLabel(s.to_string());
        let t = s.trim();
        if t == "S" {
            return Ok(IndecLabel::S);
        }
        let rest = t.strip_prefix('L').ok_or_else(bad)?;
        let mut chars = rest.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let idx = chars.as_str();
        let idx = idx
            .strip_prefix('_')
            .or_else(|| idx.strip_prefix('(').and_then(|x| x.strip_suffix(')')))
            .ok_or_else(bad)?;
        let i: usize = idx.parse().map_err(|_| bad())?;
        match kind {
            '1' => Ok(IndecLabel::L1(i)),
            '2' => Ok(IndecLabel::L2(i)),
            '3' => Ok(IndecLabel::L3(i)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for IndecLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The `3n + 1` labels in canonical order.
pub fn all_labels(n: usize) -> Vec<IndecLabel> {
    let mut v = vec![IndecLabel::S];
    v.extend((1..=n).map(IndecLabel::L1));
    v.extend((1..=n).map(IndecLabel::L2));
    v.extend((1..=n).map(IndecLabel::L3));
    v
}

fn chain_shape(p: &PosetInv) -> Result<UnShape, UnfamError> {
    p.as_un().ok_or(UnfamError::NotChainFamily)
}

/// The indecomposable with the given label over a poset of shape `𝔘_n`.
/// Vectors below are written `(a-part; b-part)` for the class `(a_j, b_j)`:
///
/// * `L1(i)`: `0` for `j < i`, `⟨(0;e)⟩` for `j ≥ i`;
/// * `L2(i)`: everything for `j ≤ i`, `⟨(0;e)⟩` for `j > i`;
/// * `L3(i)`: `⟨(0;e1),(e1;0)⟩` for `j < i`, `⟨(0;e1),(e1;e2)⟩` for `j = i`,
///   `⟨(0;e1),(0;e2)⟩` for `j > i`.
pub fn make_indec<F: Field>(p: &Arc<PosetInv>, field: &F, label: IndecLabel) -> Result<Rep<F>, UnfamError> {
    let shape = chain_shape(p)?;
    let n = shape.n;
    if !label.valid_for(n) {
        return Err(UnfamError::IndexOutOfRange(label.to_string(), n));
    }
    let d0 = if matches!(label, IndecLabel::L3(_)) { 2 } else { 1 };
    let e = |k: usize| -> Vec<F::Elem> { (0..d0).map(|r| if r == k { field.one() } else { field.zero() }).collect() };
    let z = vec![field.zero(); d0];
    let mut cols = vec![Vec::new(); p.num_classes()];
    for j in 1..=n {
        let (class, swapped) = shape.classes[j - 1];
        let pair = |a: Vec<F::Elem>, b: Vec<F::Elem>| if swapped { [b, a].concat() } else { [a, b].concat() };
        cols[class] = match label {
            IndecLabel::S => vec![],
            IndecLabel::L1(i) if j < i => vec![],
            IndecLabel::L1(_) => vec![pair(z.clone(), e(0))],
            IndecLabel::L2(i) if j <= i => vec![pair(e(0), z.clone()), pair(z.clone(), e(0))],
            IndecLabel::L2(_) => vec![pair(z.clone(), e(0))],
            IndecLabel::L3(i) if j < i => vec![pair(z.clone(), e(0)), pair(e(0), z.clone())],
            IndecLabel::L3(i) if j == i => vec![pair(z.clone(), e(0)), pair(e(0), e(1))],
            IndecLabel::L3(_) => vec![pair(z.clone(), e(0)), pair(z.clone(), e(1))],
        };
    }
    Ok(Rep::from_columns(p.clone(), field.clone(), d0, cols)?)
}

/// Square table of `dim Hom(row, column)` over labelled representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomTable {
    pub labels: Vec<IndecLabel>,
    pub dims: Vec<Vec<usize>>,
}

impl HomTable {
    pub fn get(&self, a: IndecLabel, b: IndecLabel) -> Option<usize> {
        let i = self.labels.iter().position(|&l| l == a)?;
        let j = self.labels.iter().position(|&l| l == b)?;
        Some(self.dims[i][j])
    }
}

/// The indecomposables of `𝔘_n` over a field, with their Hom table.
#[derive(Clone, Debug)]
pub struct UnFamily<F: Field> {
    n: usize,
    poset: Arc<PosetInv>,
    field: F,
    labels: Vec<IndecLabel>,
    reps: Vec<Rep<F>>,
    table: HomTable,
    table_inverse: Matrix<Rationals>,
}

impl<F: Field> UnFamily<F> {
    pub fn new(n: usize, field: F) -> Result<Self, UnfamError> {
        Self::over(Arc::new(PosetInv::make_un(n)?), field)
    }

    /// The family over an existing poset of shape `𝔘_n`.
    pub fn over(poset: Arc<PosetInv>, field: F) -> Result<Self, UnfamError> {
        let n = chain_shape(&poset)?.n;
        let labels = all_labels(n);
        let reps = labels
            .iter()
            .map(|&l| make_indec(&poset, &field, l))
            .collect::<Result<Vec<_>, _>>()?;
        let dims = reps
            .iter()
            .map(|a| reps.iter().map(|b| hom_dim(a, b)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let q = Rationals;
        let m = Matrix::from_fn(&q, labels.len(), labels.len(), |r, c| q.from_i64(dims[r][c] as i64));
        let table_inverse = m.inverse().ok_or(UnfamError::SingularHomMatrix)?;
        Ok(UnFamily { n, poset, field, table: HomTable { labels: labels.clone(), dims }, labels, reps, table_inverse })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn poset(&self) -> &Arc<PosetInv> {
        &self.poset
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn labels(&self) -> &[IndecLabel] {
        &self.labels
    }
    pub fn hom_table(&self) -> &HomTable {
        &self.table
    }

    pub fn rep(&self, label: IndecLabel) -> Result<&Rep<F>, UnfamError> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| &self.reps[i])
            .ok_or_else(|| UnfamError::IndexOutOfRange(label.to_string(), self.n))
    }

    pub fn members(&self) -> impl Iterator<Item = (IndecLabel, &Rep<F>)> {
        self.labels.iter().copied().zip(self.reps.iter())
    }

    /// Whether the member is projective, by splitting of its presentation.
    pub fn is_projective(&self, label: IndecLabel) -> Result<bool, UnfamError> {
        Ok(presentation_splits(self.rep(label)?)?)
    }

    /// Whether the member is injective, by splitting of the presentation of
    /// its dual.
    pub fn is_injective(&self, label: IndecLabel) -> Result<bool, UnfamError> {
        Ok(dual_presentation_splits(self.rep(label)?)?)
    }

    /// Multiplicities of the members in `V`, read off from the Hom
    /// dimensions `dim Hom(member, V)` through the inverse Hom table.
    pub fn multiplicities(&self, v: &Rep<F>) -> Result<Vec<(IndecLabel, usize)>, UnfamError> {
        if **v.poset() != *self.poset {
            return Err(RepError::PosetMismatch.into());
        }
        let q = Rationals;
        let h: Vec<_> = self
            .reps
            .iter()
            .map(|m| hom_dim(m, v).map(|d| q.from_i64(d as i64)))
            .collect::<Result<_, _>>()?;
        let m = self.table_inverse.mul_vec(&h);
        let mut out = Vec::new();
        for (label, x) in self.labels.iter().zip(m) {
            if !x.is_integer() || x < num_rational::BigRational::from_integer(0.into()) {
                return Err(UnfamError::NotInFamily(format!("{label}: {x}")));
            }
            let k: usize = x.to_integer().try_into().map_err(|_| UnfamError::NotInFamily(format!("{label}: {x}")))?;
            if k > 0 {
                out.push((*label, k));
            }
        }
        Ok(out)
    }

    /// The member isomorphic to an indecomposable `V`, if `V` is one.
    pub fn identify(&self, v: &Rep<F>) -> Option<IndecLabel> {
        match self.multiplicities(v).ok()?.as_slice() {
            [(label, 1)] => Some(*label),
            _ => None,
        }
    }
}

/// Multiplicities of the indecomposables of `𝔘_n` in `V`.
pub fn multiplicity_oracle<F: Field>(v: &Rep<F>) -> Result<Vec<(IndecLabel, usize)>, UnfamError> {
    UnFamily::over(v.poset().clone(), v.field().clone())?.multiplicities(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::PrimeField;
    use crate::projinj::{projective, ProjLabel};
    use crate::rep::{direct_sum_many, end_dim};

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn labels_round_trip() {
        for l in all_labels(3) {
            assert_eq!(l.to_string().parse::<IndecLabel>().unwrap(), l);
        }
        assert_eq!("L2(4)".parse::<IndecLabel>().unwrap(), IndecLabel::L2(4));
        assert!("L4_1".parse::<IndecLabel>().is_err());
        assert_eq!(all_labels(2).len(), 7);
    }

    #[test]
    fn members_are_valid_with_expected_end_rings() {
        let fam = UnFamily::new(4, gf()).unwrap();
        for (l, r) in fam.members() {
            assert!(r.is_valid(), "{l}");
            let expect = if matches!(l, IndecLabel::L3(_)) { 2 } else { 1 };
            assert_eq!(end_dim(r), expect, "{l}");
        }
        for i in 1..=4 {
            let pw = projective(fam.poset(), &gf(), ProjLabel::P(i - 1)).unwrap();
            assert_eq!(&pw, fam.rep(IndecLabel::L3(i)).unwrap());
        }
        assert!(make_indec(fam.poset(), &gf(), IndecLabel::L1(5)).is_err());
    }

    #[test]
    fn class_dimensions_of_members() {
        let fam = UnFamily::new(3, gf()).unwrap();
        assert_eq!(fam.rep(IndecLabel::L1(2)).unwrap().class_dims(), vec![0, 1, 1]);
        assert_eq!(fam.rep(IndecLabel::L2(2)).unwrap().class_dims(), vec![2, 2, 1]);
        assert_eq!(fam.rep(IndecLabel::L3(2)).unwrap().class_dims(), vec![2, 2, 2]);
    }

    #[test]
    fn oracle_on_unit_vectors_and_sums() {
        let fam = UnFamily::new(2, gf()).unwrap();
        for (l, r) in fam.members() {
            assert_eq!(fam.multiplicities(r).unwrap(), vec![(l, 1)]);
        }
        let l21 = fam.rep(IndecLabel::L2(1)).unwrap().clone();
        let s = direct_sum_many(&[l21.clone(), l21]).unwrap().sum;
        assert_eq!(fam.multiplicities(&s).unwrap(), vec![(IndecLabel::L2(1), 2)]);
    }

    #[test]
    fn members_on_the_opposite_poset_use_swapped_slots() {
        let op = Arc::new(PosetInv::make_un(2).unwrap().opposite());
        let fam = UnFamily::over(op, gf()).unwrap();
        for (_, r) in fam.members() {
            assert!(r.is_valid());
        }
    }
}
