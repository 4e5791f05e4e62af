//! The exact structure on representations: deflations (proper epimorphisms),
//! inflations (proper monomorphisms), their kernels and cokernels, exact
//! pairs, pullbacks and pushouts.

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::exactla::{Field, Matrix};
use crate::rep::{direct_sum, extend_along, is_morphism, lift_through, Morphism, Rep, RepError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("map is not a deflation")]
    NotDeflation,
    #[error("map is not an inflation")]
    NotInflation,
    #[error("pair is not an exact sequence")]
    NotExact,
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `f0` surjective and `φ^z(V_z) = W_z` for every class.
pub fn is_proper_epi<F: Field>(f: &Morphism<F>) -> bool {
    let w = f.target();
    f.matrix().rank() == w.d0() && (0..w.poset().num_classes()).all(|z| f.image_at(z).dim() == w.sub(z).dim())
}

/// `f0` injective and `φ^z(U_z) = V_z ∩ φ^z(U₀^z)` for every class.
pub fn is_proper_mono<F: Field>(f: &Morphism<F>) -> bool {
    let (u, v) = (f.source(), f.target());
    if f.matrix().rank() != u.d0() {
        return false;
    }
    (0..u.poset().num_classes()).all(|z| {
        let reachable = v.sub(z).intersect(&f.class_map(z).image()).unwrap();
        f.image_at(z).dim() == reachable.dim()
    })
}

/// `U₀ = ker f0`, `U_z = U₀^z ∩ V_z`, with the inclusion `U → V`.
pub fn kernel_rep<F: Field>(f: &Morphism<F>) -> Result<(Rep<F>, Morphism<F>), ExactError> {
    if !is_proper_epi(f) {
        return Err(ExactError::NotDeflation);
    }
    Ok(kernel_of(f))
}

fn kernel_of<F: Field>(f: &Morphism<F>) -> (Rep<F>, Morphism<F>) {
    let kb = f.matrix().kernel().basis().clone();
    let u = f.source().restrict_to(&kb);
    let incl = Morphism::new(u.clone(), f.source().clone(), kb).expect("kernel inclusion");
    (u, incl)
}

/// `W₀ = V₀ / im f0` on the non-pivot coordinates of `im f0`, with
/// `W_z = g^z(V_z)` for the quotient map `g`.
pub fn cokernel_rep<F: Field>(f: &Morphism<F>) -> Result<(Rep<F>, Morphism<F>), ExactError> {
    if !is_proper_mono(f) {
        return Err(ExactError::NotInflation);
    }
    Ok(cokernel_of(f))
}

fn cokernel_of<F: Field>(f: &Morphism<F>) -> (Rep<F>, Morphism<F>) {
    let v = f.target();
    let g = f.matrix().image().quotient_map();
    let sub = (0..v.poset().num_classes())
        .map(|z| v.sub(z).image_under(&g.kron_identity(v.poset().class_size(z))).unwrap())
        .collect();
    let w = Rep::unchecked(v.poset().clone(), v.field().clone(), g.rows(), sub).expect("cokernel shapes");
    let proj = Morphism::new(v.clone(), w.clone(), g).expect("cokernel projection");
    (w, proj)
}

/// Exactness of `0 → X → Y → Z → 0` at the level of `V₀` and at every class.
pub fn is_eps_exact<F: Field>(u: &Morphism<F>, v: &Morphism<F>) -> bool {
    let (x, y, z) = (u.source(), u.target(), v.target());
    if v.source() != y {
        return false;
    }
    let ok_maps = [(x, y, u.matrix()), (y, z, v.matrix())]
        .into_iter()
        .all(|(a, b, m)| is_morphism(a, b, m).map(|c| c.holds()).unwrap_or(false));
    if !ok_maps || !v.matrix().mul(u.matrix()).is_zero() {
        return false;
    }
    if u.matrix().rank() != x.d0() || v.matrix().rank() != z.d0() || y.d0() != x.d0() + z.d0() {
        return false;
    }
    (0..y.poset().num_classes()).all(|c| {
        let (dx, dy, dz) = (x.sub(c).dim(), y.sub(c).dim(), z.sub(c).dim());
        v.image_at(c).dim() == dz && dy == dx + dz
    })
}

/// A verified exact pair `X →u Y →v Z`.
#[derive(Clone, Debug)]
pub struct EpsSeq<F: Field> {
    pub u: Morphism<F>,
    pub v: Morphism<F>,
}

impl<F: Field> EpsSeq<F> {
    pub fn new(u: Morphism<F>, v: Morphism<F>) -> Result<Self, ExactError> {
        if !is_eps_exact(&u, &v) {
            return Err(ExactError::NotExact);
        }
        Ok(EpsSeq { u, v })
    }

    /// Completes an inflation with its cokernel.
    pub fn from_inflation(u: Morphism<F>) -> Result<Self, ExactError> {
        let (_, v) = cokernel_rep(&u)?;
        Ok(EpsSeq { u, v })
    }

    /// Completes a deflation with its kernel.
    pub fn from_deflation(v: Morphism<F>) -> Result<Self, ExactError> {
        let (_, u) = kernel_rep(&v)?;
        Ok(EpsSeq { u, v })
    }

    pub fn left(&self) -> &Rep<F> {
        self.u.source()
    }
    pub fn middle(&self) -> &Rep<F> {
        self.u.target()
    }
    pub fn right(&self) -> &Rep<F> {
        self.v.target()
    }

    pub fn is_split(&self) -> bool {
        deflation_section(&self.v).is_some()
    }
}

/// Some morphism `s : Z → Y` with `v ∘ s = id_Z`.
pub fn deflation_section<F: Field>(v: &Morphism<F>) -> Option<Matrix<F>> {
    let z = v.target();
    lift_through(z, v, &Matrix::identity(z.field(), z.d0())).ok().flatten()
}

/// Some morphism `r : Y → X` with `r ∘ u = id_X`.
pub fn inflation_retraction<F: Field>(u: &Morphism<F>) -> Option<Matrix<F>> {
    let x = u.source();
    extend_along(u, x, &Matrix::identity(x.field(), x.d0())).ok().flatten()
}

/// The pullback of a deflation `v : Y → Z` along `f : W → Z`.
#[derive(Clone, Debug)]
pub struct Pullback<F: Field> {
    pub rep: Rep<F>,
    /// `L → Y`.
    pub h1: Morphism<F>,
    /// `L → W`, again a deflation.
    pub h2: Morphism<F>,
}

/// `L₀ = {(y, w) : v(y) = f(w)}` inside `Y ⊕ W`.
pub fn pullback<F: Field>(v: &Morphism<F>, f: &Morphism<F>) -> Result<Pullback<F>, ExactError> {
    if !is_proper_epi(v) {
        return Err(ExactError::NotDeflation);
    }
    if v.target() != f.target() {
        return Err(RepError::PosetMismatch.into());
    }
    let (y, w) = (v.source(), f.source());
    let ds = direct_sum(y, w)?;
    let m = v.matrix().hstack(&f.matrix().neg());
    let diff = Morphism::new(ds.sum.clone(), v.target().clone(), m)?;
    let (l, incl) = kernel_rep(&diff)?;
    let k = incl.matrix();
    let h1 = Morphism::new(l.clone(), y.clone(), k.row_range(0, y.d0()))?;
    let h2 = Morphism::new(l.clone(), w.clone(), k.row_range(y.d0(), y.d0() + w.d0()))?;
    Ok(Pullback { rep: l, h1, h2 })
}

/// The pushout of an inflation `u : X → Y` along `g : X → W`.
#[derive(Clone, Debug)]
pub struct Pushout<F: Field> {
    pub rep: Rep<F>,
    /// `Y → F`.
    pub from_y: Morphism<F>,
    /// `W → F`, again an inflation.
    pub from_w: Morphism<F>,
}

/// `F₀ = (W₀ ⊕ Y₀) / {(g(x), −u(x))}`.
pub fn pushout<F: Field>(u: &Morphism<F>, g: &Morphism<F>) -> Result<Pushout<F>, ExactError> {
    if !is_proper_mono(u) {
        return Err(ExactError::NotInflation);
    }
    if u.source() != g.source() {
        return Err(RepError::PosetMismatch.into());
    }
    let (y, w) = (u.target(), g.target());
    let ds = direct_sum(w, y)?;
    let m = g.matrix().vstack(&u.matrix().neg());
    let anti = Morphism::new(u.source().clone(), ds.sum.clone(), m)?;
    let (fr, q) = cokernel_rep(&anti)?;
    let qm = q.matrix();
    let from_w = Morphism::new(w.clone(), fr.clone(), qm.col_range(0, w.d0()))?;
    let from_y = Morphism::new(y.clone(), fr.clone(), qm.col_range(w.d0(), w.d0() + y.d0()))?;
    Ok(Pushout { rep: fr, from_y, from_w })
}

/// A seeded random inflation into `y`: the inclusion of the subrepresentation
/// carried by a random subspace of `Y₀`.
pub fn random_inflation_into<F: Field>(y: &Rep<F>, rng: &mut dyn RngCore) -> Morphism<F> {
    let m = rng.gen_range(0..=y.d0());
    let mut k = Matrix::random(y.field(), y.d0(), m, rng);
    if k.rank() < m {
        k = k.image().basis().clone();
    }
    let x = y.restrict_to(&k);
    Morphism::new(x, y.clone(), k).expect("restriction inclusion")
}

/// A seeded random deflation out of `y`: the cokernel of a random inflation.
pub fn random_deflation_from<F: Field>(y: &Rep<F>, rng: &mut dyn RngCore) -> Morphism<F> {
    let u = random_inflation_into(y, rng);
    cokernel_of(&u).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Subspace};
    use crate::poset::PosetInv;
    use crate::rep::random_morphism;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn u1() -> Arc<PosetInv> {
        Arc::new(PosetInv::make_un(1).unwrap())
    }

    // d0 = 2 with the class subspace ⟨(0;e1),(e1;e2)⟩.
    fn projective_pair(p: Arc<PosetInv>) -> Rep<PrimeField> {
        Rep::from_columns(p, gf(), 2, vec![vec![vec![0, 0, 1, 0], vec![1, 0, 0, 1]]]).unwrap()
    }

    fn b_line(p: Arc<PosetInv>) -> Rep<PrimeField> {
        Rep::from_columns(p, gf(), 1, vec![vec![vec![0, 1]]]).unwrap()
    }

    #[test]
    fn epi_onto_the_b_line_and_its_kernel() {
        let (big, small) = (projective_pair(u1()), b_line(u1()));
        let f = Morphism::new(big.clone(), small.clone(), Matrix::from_ints(&gf(), &[&[0, 1]])).unwrap();
        assert!(is_proper_epi(&f));
        let (k, incl) = kernel_rep(&f).unwrap();
        assert_eq!(k, small);
        assert_eq!(incl.matrix(), &Matrix::from_ints(&gf(), &[&[1], &[0]]));
        assert!(is_eps_exact(&incl, &f));
        assert!(!is_proper_epi(&Morphism::zero(&big, &small)));
    }

    #[test]
    fn mono_from_the_b_line() {
        let (big, small) = (projective_pair(u1()), b_line(u1()));
        let f = Morphism::new(small, big, Matrix::from_ints(&gf(), &[&[1], &[0]])).unwrap();
        assert!(is_proper_mono(&f));
        let (c, _) = cokernel_rep(&f).unwrap();
        assert_eq!(c.d0(), 1);
        assert_eq!(c.sub(0), &Subspace::from_vectors(&gf(), 2, &[vec![0, 1]]));
    }

    #[test]
    fn identity_is_both_and_has_zero_kernel_and_cokernel() {
        let v = projective_pair(u1());
        let id = Morphism::identity(&v);
        assert!(is_proper_epi(&id) && is_proper_mono(&id));
        assert!(kernel_rep(&id).unwrap().0.is_zero());
        assert!(cokernel_rep(&id).unwrap().0.is_zero());
    }

    #[test]
    fn split_sums_and_pullback_pushout_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = Arc::new(PosetInv::make_un(2).unwrap());
        for _ in 0..30 {
            let a = Rep::random(p.clone(), gf(), rng.gen_range(0..3), &mut rng);
            let b = Rep::random(p.clone(), gf(), rng.gen_range(0..3), &mut rng);
            let ds = direct_sum(&a, &b).unwrap();
            let seq = EpsSeq::new(ds.inclusions[0].clone(), ds.projections[1].clone()).unwrap();
            assert!(seq.is_split());
            assert!(inflation_retraction(&seq.u).is_some());

            let y = Rep::random(p.clone(), gf(), rng.gen_range(0..4), &mut rng);
            let v = random_deflation_from(&y, &mut rng);
            let w = Rep::random(p.clone(), gf(), rng.gen_range(0..3), &mut rng);
            let f = random_morphism(&w, v.target(), &mut rng).unwrap();
            let pb = pullback(&v, &f).unwrap();
            assert_eq!(pb.rep.d0(), y.d0() + w.d0() - v.target().d0());
            assert!(is_proper_epi(&pb.h2));
            assert_eq!(v.matrix().mul(pb.h1.matrix()), f.matrix().mul(pb.h2.matrix()));

            let u = random_inflation_into(&y, &mut rng);
            let g = random_morphism(u.source(), &w, &mut rng).unwrap();
            let po = pushout(&u, &g).unwrap();
            assert_eq!(po.rep.d0(), w.d0() + y.d0() - u.source().d0());
            assert!(is_proper_mono(&po.from_w));
            assert_eq!(po.from_y.matrix().mul(u.matrix()), po.from_w.matrix().mul(g.matrix()));
        }
    }

    #[test]
    fn non_exact_pairs_are_rejected() {
        let v = projective_pair(u1());
        let id = Morphism::identity(&v);
        assert!(!is_eps_exact(&id, &id));
        assert!(matches!(EpsSeq::new(id.clone(), id), Err(ExactError::NotExact)));
    }
}
