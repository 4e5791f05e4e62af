//! Truncation model of the infinite chain: a representation of level `n`
//! stands for its extension by `⟨(0;v) : v ∈ V₀⟩` at every class beyond `n`.

use std::sync::Arc;

use super::almost_split::{verify_almost_split, AlmostSplit, AlmostSplitReport};
use super::{IndecLabel, UnFamily, UnfamError};
use crate::exactla::{Field, Matrix, Subspace};
use crate::poset::PosetInv;
use crate::rep::{slot_inclusion, Rep};

/// Extends a representation of `𝔘_n` (canonical layout) to `𝔘_m`.
pub fn xi<F: Field>(v: &Rep<F>, m: usize) -> Result<Rep<F>, UnfamError> {
    let shape = v.poset().as_un().filter(|s| s.is_canonical()).ok_or(UnfamError::NotChainFamily)?;
    let n = shape.n;
    if m < n {
        return Err(UnfamError::TargetBelowLevel { target: m, level: n });
    }
    let p = Arc::new(PosetInv::make_un(m)?);
    let f = v.field();
    let d = v.d0();
    let upper = Subspace::span(&slot_inclusion(f, d, 2, 1));
    let sub = (0..m)
        .map(|j| if j < n { v.sub(j).clone() } else { upper.clone() })
        .collect();
    Ok(Rep::new(p, f.clone(), d, sub)?)
}

/// One step of the extension, `𝔘_n → 𝔘_{n+1}`.
pub fn theta<F: Field>(v: &Rep<F>) -> Result<Rep<F>, UnfamError> {
    let n = v.poset().as_un().ok_or(UnfamError::NotChainFamily)?.n;
    xi(v, n + 1)
}

/// The label of the extension of a level-`n` member at any higher level.
/// Only `S` changes: its extension is `L1_{n+1}`.
pub fn label_after_extension(label: IndecLabel, n: usize) -> IndecLabel {
    match label {
        IndecLabel::S => IndecLabel::L1(n + 1),
        other => other,
    }
}

/// A representation of the infinite chain given at a finite level.
#[derive(Clone, Debug)]
pub struct InfRep<F: Field> {
    pub level: usize,
    pub body: Rep<F>,
}

impl<F: Field> InfRep<F> {
    pub fn new(body: Rep<F>) -> Result<Self, UnfamError> {
        let shape = body.poset().as_un().filter(|s| s.is_canonical()).ok_or(UnfamError::NotChainFamily)?;
        Ok(InfRep { level: shape.n, body })
    }

    pub fn at_level(&self, m: usize) -> Result<Rep<F>, UnfamError> {
        xi(&self.body, m)
    }
}

impl<F: Field> PartialEq for InfRep<F> {
    fn eq(&self, other: &Self) -> bool {
        let m = self.level.max(other.level);
        match (self.at_level(m), other.at_level(m)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InfiniteCertificate {
    pub labels: (IndecLabel, IndecLabel, IndecLabel),
    /// Verification at each higher level, with the labels there.
    pub levels: Vec<(usize, (IndecLabel, IndecLabel, IndecLabel), AlmostSplitReport)>,
}

impl InfiniteCertificate {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|(_, _, r)| r.passed())
    }
}

/// Extends a level-`n` almost split sequence to levels `n+1` and `n+2` and
/// verifies it there. Sequences starting at `S` are rejected.
pub fn infinite_almost_split<F: Field>(seq: &AlmostSplit<F>, n: usize) -> Result<InfiniteCertificate, UnfamError> {
    if seq.x == IndecLabel::S {
        return Err(UnfamError::TrivialLeftEnd);
    }
    let field = seq.seq.left().field().clone();
    let mut levels = Vec::new();
    for m in [n + 1, n + 2] {
        let fam = UnFamily::new(m, field.clone())?;
        let (x, y, z) = (xi(seq.seq.left(), m)?, xi(seq.seq.middle(), m)?, xi(seq.seq.right(), m)?);
        let u0: &Matrix<F> = seq.seq.u.matrix();
        let v0: &Matrix<F> = seq.seq.v.matrix();
        let report = verify_almost_split(&fam, &x, &y, &z, u0, v0);
        let labels = (
            label_after_extension(seq.x, n),
            label_after_extension(seq.y, n),
            label_after_extension(seq.z, n),
        );
        levels.push((m, labels, report));
    }
    Ok(InfiniteCertificate { labels: seq.labels(), levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::PrimeField;
    use crate::unfam::{compute_almost_split, make_indec};

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn extension_of_s_and_composition() {
        let p1 = Arc::new(PosetInv::make_un(1).unwrap());
        let s = make_indec(&p1, &gf(), IndecLabel::S).unwrap();
        let e = xi(&s, 3).unwrap();
        let line = Subspace::from_vectors(&gf(), 2, &[vec![0, 1]]);
        assert!(e.sub(0).is_zero());
        assert_eq!(e.sub(1), &line);
        assert_eq!(e.sub(2), &line);
        assert_eq!(xi(&theta(&s).unwrap(), 3).unwrap(), e);
        assert!(matches!(xi(&e, 2), Err(UnfamError::TargetBelowLevel { .. })));
        let p3 = Arc::new(PosetInv::make_un(3).unwrap());
        assert_eq!(e, make_indec(&p3, &gf(), IndecLabel::L1(2)).unwrap());
        assert!(InfRep::new(s.clone()).unwrap() == InfRep::new(e.clone()).unwrap());
        assert!(InfRep::new(s).unwrap() != InfRep::new(make_indec(&p3, &gf(), IndecLabel::S).unwrap()).unwrap());
    }

    #[test]
    fn members_extend_to_members() {
        let p2 = Arc::new(PosetInv::make_un(2).unwrap());
        let p4 = Arc::new(PosetInv::make_un(4).unwrap());
        for l in crate::unfam::all_labels(2) {
            let e = xi(&make_indec(&p2, &gf(), l).unwrap(), 4).unwrap();
            assert_eq!(e, make_indec(&p4, &gf(), label_after_extension(l, 2)).unwrap());
        }
    }

    #[test]
    fn extended_sequences_verify() {
        let fam = UnFamily::new(2, gf()).unwrap();
        for s in compute_almost_split(&fam).unwrap() {
            match infinite_almost_split(&s, 2) {
                Ok(cert) => assert!(cert.passed(), "{:?}", cert.labels),
                Err(e) => {
                    assert_eq!(s.x, IndecLabel::S);
                    assert_eq!(e, UnfamError::TrivialLeftEnd);
                }
            }
        }
    }
}
