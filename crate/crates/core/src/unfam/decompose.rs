//! Direct-sum decomposition by Fitting splitting, locality of endomorphism
//! rings and isomorphism search. Works over any poset; parts are labelled
//! only over `𝔘_n`.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IndecLabel, UnFamily};
use crate::exactla::{poly, Field, Matrix, Subspace};
use crate::rep::{direct_sum_many, hom_matrices, is_morphism, linear_combination, Rep};

fn flatten<F: Field>(ms: &[Matrix<F>], field: &F, rows: usize, cols: usize) -> Subspace<F> {
    let vecs: Vec<Vec<F::Elem>> = ms.iter().map(|m| m.entries().to_vec()).collect();
    Subspace::from_vectors(field, rows * cols, &vecs)
}

fn power_of_linear<F: Field>(f: &F, c: &F::Elem, d: usize) -> Vec<F::Elem> {
    let lin = vec![f.neg(c), f.one()];
    (0..d).fold(vec![f.one()], |acc, _| poly::mul(f, &acc, &lin))
}

/// A basis of the radical of `End(V)` when `End(V)` is local with residue
/// field `k`, and `None` otherwise.
///
/// Every basis endomorphism must have a single eigenvalue `c_i` in `k`; the
/// candidate radical is the kernel of the linear form `Σ aᵢbᵢ ↦ Σ aᵢcᵢ`, and it
/// is accepted when it is closed under products and nilpotent.
pub fn end_radical<F: Field>(v: &Rep<F>, rng: &mut dyn RngCore) -> Option<Vec<Matrix<F>>> {
    let d = v.d0();
    if d == 0 {
        return None;
    }
    let f = v.field();
    let basis = hom_matrices(v, v).ok()?;
    let mut eig = Vec::with_capacity(basis.len());
    for b in &basis {
        let cp = poly::charpoly(b);
        let c = f.find_root(&cp, rng)?;
        if cp != power_of_linear(f, &c, d) {
            return None;
        }
        eig.push(c);
    }
    let k = eig.iter().position(|c| !f.is_zero(c))?;
    let rad: Vec<Matrix<F>> = basis
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(i, b)| {
            let r = f.div(&eig[i], &eig[k]).unwrap();
            b.sub(&basis[k].scale(&r))
        })
        .collect();
    let span = flatten(&rad, f, d, d);
    if !rad.iter().all(|a| rad.iter().all(|b| span.contains(a.mul(b).entries()))) {
        return None;
    }
    let mut power = rad.clone();
    for _ in 0..=d {
        if power.is_empty() {
            return Some(rad);
        }
        let prod: Vec<Matrix<F>> = power.iter().flat_map(|p| rad.iter().map(move |t| p.mul(t))).collect();
        power = flatten(&prod, f, d, d)
            .basis()
            .columns()
            .into_iter()
            .map(|c| Matrix::from_fn(f, d, d, |r, cc| c[r * d + cc].clone()))
            .collect();
    }
    None
}

/// A summand found by the decomposition, with its embedding into `V₀`.
#[derive(Clone, Debug)]
pub struct Part<F: Field> {
    pub rep: Rep<F>,
    /// `d0(V) × d0(part)`, columns spanning the summand inside `V₀`.
    pub embedding: Matrix<F>,
    pub label: Option<IndecLabel>,
    /// The splitting budget ran out without proving the end ring local.
    pub presumed: bool,
}

impl<F: Field> Part<F> {
    pub fn describe(&self) -> String {
        match (&self.label, self.presumed) {
            (Some(l), _) => l.to_string(),
            (None, true) => format!("presumed-indecomposable(d0={}, dims={:?})", self.rep.d0(), self.rep.class_dims()),
            (None, false) => format!("indecomposable(d0={}, dims={:?})", self.rep.d0(), self.rep.class_dims()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition<F: Field> {
    pub parts: Vec<Part<F>>,
    /// The block isomorphism `⊕ parts → V`.
    pub certificate: Matrix<F>,
    /// The certificate is a morphism in both directions.
    pub certified: bool,
}

impl<F: Field> Decomposition<F> {
    /// Part descriptions with multiplicities, in sorted order.
    pub fn multiset(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for p in &self.parts {
            *m.entry(p.describe()).or_insert(0) += 1;
        }
        m
    }

    /// Label multiplicities when every part is labelled.
    pub fn labels(&self) -> Option<Vec<(IndecLabel, usize)>> {
        let mut m: BTreeMap<IndecLabel, usize> = BTreeMap::new();
        for p in &self.parts {
            *m.entry(p.label?).or_insert(0) += 1;
        }
        Some(m.into_iter().collect())
    }

    pub fn any_presumed(&self) -> bool {
        self.parts.iter().any(|p| p.presumed)
    }
}

/// Splits `V` into indecomposable summands with a seeded generator.
pub fn decompose<F: Field>(v: &Rep<F>, seed: u64) -> Decomposition<F> {
    let family = UnFamily::over(v.poset().clone(), v.field().clone()).ok();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    decompose_with(v, family.as_ref(), &mut rng)
}

/// Fitting splitting: for an endomorphism `φ` with an eigenvalue `λ`, the
/// power `ψ = (φ − λ)^d0` gives `V₀ = ker ψ ⊕ im ψ` compatibly with every
/// class subspace. A part stops splitting once its end ring is local, or
/// after `64·d0` failed attempts.
pub fn decompose_with<F: Field>(v: &Rep<F>, family: Option<&UnFamily<F>>, rng: &mut dyn RngCore) -> Decomposition<F> {
    let f = v.field().clone();
    let mut work = vec![(v.clone(), Matrix::identity(&f, v.d0()))];
    let mut parts = Vec::new();
    while let Some((w, emb)) = work.pop() {
        if w.d0() == 0 {
            continue;
        }
        if end_radical(&w, rng).is_some() {
            parts.push(Part { rep: w, embedding: emb, label: None, presumed: false });
            continue;
        }
        match fitting_split(&w, rng) {
            Some((k, i)) => {
                let (wk, wi) = (w.restrict_to(&k), w.restrict_to(&i));
                work.push((wi, emb.mul(&i)));
                work.push((wk, emb.mul(&k)));
            }
            None => parts.push(Part { rep: w, embedding: emb, label: None, presumed: true }),
        }
    }
    if let Some(fam) = family {
        for p in &mut parts {
            p.label = fam.identify(&p.rep);
        }
    }
    let certificate = parts
        .iter()
        .fold(Matrix::zeros(&f, v.d0(), 0), |acc, p| acc.hstack(&p.embedding));
    let certified = if parts.is_empty() {
        v.d0() == 0
    } else {
        let reps: Vec<Rep<F>> = parts.iter().map(|p| p.rep.clone()).collect();
        let sum = direct_sum_many(&reps).map(|d| d.sum);
        match (sum, certificate.inverse()) {
            (Ok(sum), Some(inv)) => {
                let fwd = is_morphism(&sum, v, &certificate).map(|c| c.holds()).unwrap_or(false);
                let back = is_morphism(v, &sum, &inv).map(|c| c.holds()).unwrap_or(false);
                fwd && back
            }
            _ => false,
        }
    };
    Decomposition { parts, certificate, certified }
}

fn fitting_split<F: Field>(w: &Rep<F>, rng: &mut dyn RngCore) -> Option<(Matrix<F>, Matrix<F>)> {
    let f = w.field();
    let d = w.d0();
    let basis = hom_matrices(w, w).ok()?;
    let id = Matrix::identity(f, d);
    for attempt in 0..64 * d {
        let phi = if attempt < basis.len() {
            basis[attempt].clone()
        } else {
            let coeffs: Vec<F::Elem> = basis.iter().map(|_| f.random(rng)).collect();
            linear_combination(f, &basis, &coeffs, d, d)
        };
        let Some(l) = f.find_root(&poly::charpoly(&phi), rng) else { continue };
        let psi = phi.sub(&id.scale(&l)).pow(d);
        let k = psi.kernel();
        if k.dim() == 0 || k.dim() == d {
            continue;
        }
        return Some((k.basis().clone(), psi.image().basis().clone()));
    }
    None
}

/// An isomorphism `V → W` if one is found among the Hom basis and 32 random
/// combinations.
pub fn find_isomorphism<F: Field>(v: &Rep<F>, w: &Rep<F>, rng: &mut dyn RngCore) -> Option<Matrix<F>> {
    if v.dim_vector() != w.dim_vector() {
        return None;
    }
    let basis = hom_matrices(v, w).ok()?;
    let f = v.field();
    let works = |m: &Matrix<F>| {
        m.inverse()
            .is_some_and(|inv| is_morphism(w, v, &inv).map(|c| c.holds()).unwrap_or(false))
    };
    if v.d0() == 0 {
        return Some(Matrix::zeros(f, 0, 0));
    }
    if let Some(m) = basis.iter().find(|m| works(m)) {
        return Some(m.clone());
    }
    for _ in 0..32 {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| f.random(rng)).collect();
        let m = linear_combination(f, &basis, &coeffs, w.d0(), v.d0());
        if works(&m) {
            return Some(m);
        }
    }
    None
}

pub fn is_isomorphic<F: Field>(v: &Rep<F>, w: &Rep<F>, seed: u64) -> bool {
    find_isomorphism(v, w, &mut ChaCha8Rng::seed_from_u64(seed)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};
    use crate::poset::PosetInv;
    use rand::Rng;
    use std::sync::Arc;

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn members_are_local_and_sums_are_not() {
        let fam = UnFamily::new(3, gf()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (l, r) in fam.members() {
            let rad = end_radical(r, &mut rng).unwrap_or_else(|| panic!("{l}"));
            let expect = if matches!(l, IndecLabel::L3(_)) { 1 } else { 0 };
            assert_eq!(rad.len(), expect);
        }
        let s = fam.rep(IndecLabel::S).unwrap().clone();
        let ss = direct_sum_many(&[s.clone(), s]).unwrap().sum;
        assert!(end_radical(&ss, &mut rng).is_none());
    }

    #[test]
    fn decompose_sum_of_s() {
        let fam = UnFamily::new(1, gf()).unwrap();
        let s = fam.rep(IndecLabel::S).unwrap().clone();
        let ss = direct_sum_many(&[s.clone(), s]).unwrap().sum;
        let d = decompose(&ss, 0);
        assert!(d.certified);
        assert_eq!(d.labels().unwrap(), vec![(IndecLabel::S, 2)]);
    }

    #[test]
    fn decompose_scrambled_sum() {
        let fam = UnFamily::new(2, gf()).unwrap();
        let parts: Vec<Rep<PrimeField>> = [IndecLabel::L1(2), IndecLabel::L3(1), IndecLabel::S]
            .iter()
            .map(|&l| fam.rep(l).unwrap().clone())
            .collect();
        let sum = direct_sum_many(&parts).unwrap().sum;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Matrix::random_invertible(&gf(), sum.d0(), &mut rng);
        let scrambled = sum.transport(&g);
        let d = decompose(&scrambled, 0);
        assert!(d.certified && !d.any_presumed());
        assert_eq!(
            d.labels().unwrap(),
            vec![(IndecLabel::S, 1), (IndecLabel::L1(2), 1), (IndecLabel::L3(1), 1)]
        );
        assert_eq!(fam.multiplicities(&scrambled).unwrap(), d.labels().unwrap());
    }

    #[test]
    fn decompose_over_rationals() {
        let fam = UnFamily::new(2, Rationals).unwrap();
        let a = fam.rep(IndecLabel::L3(2)).unwrap().clone();
        let b = fam.rep(IndecLabel::L2(1)).unwrap().clone();
        let sum = direct_sum_many(&[a.clone(), b, a]).unwrap().sum;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Matrix::random_invertible(&Rationals, sum.d0(), &mut rng);
        let d = decompose(&sum.transport(&g), 1);
        assert!(d.certified);
        assert_eq!(d.labels().unwrap(), vec![(IndecLabel::L2(1), 1), (IndecLabel::L3(2), 2)]);
    }

    #[test]
    fn random_reps_on_a_general_poset_decompose_with_certificate() {
        let p = Arc::new(
            PosetInv::build(
                &["a", "a*", "b", "b*"],
                &[("a", "b*"), ("a*", "b"), ("a*", "b*")],
                &[vec!["a", "a*"], vec!["b", "b*"]],
            )
            .unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let v = Rep::random(p.clone(), gf(), rng.gen_range(0..5), &mut rng);
            let d = decompose_with(&v, None, &mut rng);
            assert!(d.certified);
            assert_eq!(d.parts.iter().map(|p| p.rep.d0()).sum::<usize>(), v.d0());
        }
    }

    #[test]
    fn isomorphism_search() {
        let fam = UnFamily::new(2, gf()).unwrap();
        let l = fam.rep(IndecLabel::L3(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = l.transport(&Matrix::random_invertible(&gf(), 2, &mut rng));
        assert!(is_isomorphic(l, &t, 0));
        assert!(!is_isomorphic(fam.rep(IndecLabel::L1(1)).unwrap(), fam.rep(IndecLabel::L2(1)).unwrap(), 0));
    }
}
