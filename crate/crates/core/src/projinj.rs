//! Projective representations `S` and `P(w)`, projective presentations,
//! quotient representations with the functors `C`, `K`, `D₁`, `D₂`, and the
//! injectives obtained by duality.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use thiserror::Error;

use crate::exactcat::{is_proper_epi, random_deflation_from, random_inflation_into, ExactError};
use crate::exactla::{poly, Field, Matrix, Subspace};
use crate::poset::PosetInv;
use crate::rep::{direct_sum_many, extend_along, hom_matrices, lift_through, Morphism, Rep, RepError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjInjError {
    #[error("vector is not in the class subspace")]
    ElementNotInSubspace,
    #[error("class {0} does not exist")]
    BadLabel(usize),
    #[error("quotient map at class {0} is not surjective")]
    NotSurjective(usize),
    #[error("quotient maps at {0} and {1} are not compatible")]
    Incompatible(String, String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `S` or `P(z)` for a class index `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjLabel {
    S,
    P(usize),
}

impl fmt::Display for ProjLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjLabel::S => write!(f, "S"),
            ProjLabel::P(z) => write!(f, "P({z})"),
        }
    }
}

pub fn projective_labels(p: &PosetInv) -> Vec<ProjLabel> {
    std::iter::once(ProjLabel::S).chain((0..p.num_classes()).map(ProjLabel::P)).collect()
}

fn unit<F: Field>(field: &F, len: usize, at: usize) -> Vec<F::Elem> {
    (0..len).map(|i| if i == at { field.one() } else { field.zero() }).collect()
}

/// `S` has `S₀ = k` and zero class subspaces. `P(w)` has a basis vector of
/// `P(w)₀` per member of `w`; a member `c` sends its basis vector `e_c` into
/// slot `s` of class `z` whenever `c` lies strictly below the slot-`s`
/// member of `z`, and class `w` also holds the generator (one `e_c` per slot).
pub fn projective<F: Field>(p: &Arc<PosetInv>, field: &F, label: ProjLabel) -> Result<Rep<F>, ProjInjError> {
    let w = match label {
        ProjLabel::S => return Ok(Rep::trivial(p.clone(), field.clone(), 1)),
        ProjLabel::P(w) if w < p.num_classes() => w,
        ProjLabel::P(w) => return Err(ProjInjError::BadLabel(w)),
    };
    let members = p.class(w);
    let d0 = members.len();
    let mut gens: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); p.num_classes()];
    for (z, g) in gens.iter_mut().enumerate() {
        let s = p.class_size(z);
        for (slot, &target) in p.class(z).iter().enumerate() {
            for (k, &c) in members.iter().enumerate() {
                if p.lt(c, target) {
                    g.push(unit(field, d0 * s, slot * d0 + k));
                }
            }
        }
    }
    gens[w].push((0..d0).flat_map(|slot| unit(field, d0, slot)).collect());
    let cols = gens
        .into_iter()
        .map(|g| g.into_iter().collect::<Vec<_>>())
        .collect();
    Ok(Rep::from_columns(p.clone(), field.clone(), d0, cols)?)
}

/// The generator of `P(w)` (or of `S`) as an element of its class subspace.
pub fn generator<F: Field>(p: &PosetInv, field: &F, label: ProjLabel) -> Vec<F::Elem> {
    match label {
        ProjLabel::S => vec![field.one()],
        ProjLabel::P(w) => {
            let d0 = p.class_size(w);
            (0..d0).flat_map(|slot| unit(field, d0, slot)).collect()
        }
    }
}

/// The unique morphism from `P(w)` (or `S`) to `V` sending the generator to
/// `v`, where `v ∈ V_w` (or `v ∈ V₀`).
pub fn morphism_from_projective<F: Field>(label: ProjLabel, v: &[F::Elem], target: &Rep<F>) -> Result<Morphism<F>, ProjInjError> {
    let p = target.poset();
    let field = target.field();
    let src = projective(p, field, label)?;
    let d = target.d0();
    let f0 = match label {
        ProjLabel::S => {
            if v.len() != d {
                return Err(ProjInjError::ElementNotInSubspace);
            }
            Matrix::from_columns(field, d, &[v.to_vec()])
        }
        ProjLabel::P(w) => {
            if v.len() != d * p.class_size(w) || !target.sub(w).contains(v) {
                return Err(ProjInjError::ElementNotInSubspace);
            }
            let cols: Vec<Vec<F::Elem>> = v.chunks(d.max(1)).map(<[_]>::to_vec).take(p.class_size(w)).collect();
            Matrix::from_columns(field, d, &cols)
        }
    };
    Ok(Morphism::new(src, target.clone(), f0)?)
}

/// Evaluation at the generator is injective on `Hom(P(w), V)`.
pub fn evaluation_is_injective<F: Field>(label: ProjLabel, target: &Rep<F>) -> Result<bool, ProjInjError> {
    let src = projective(target.poset(), target.field(), label)?;
    let g = generator(target.poset(), target.field(), label);
    let basis = hom_matrices(&src, target)?;
    let class_size = match label {
        ProjLabel::S => 1,
        ProjLabel::P(w) => target.poset().class_size(w),
    };
    let images: Vec<Vec<F::Elem>> = basis.iter().map(|m| m.kron_identity(class_size).mul_vec(&g)).collect();
    let rows = target.d0() * class_size;
    Ok(Matrix::from_columns(target.field(), rows, &images).rank() == basis.len())
}

/// A projective cover-style presentation: one `S` per basis vector of `V₀`
/// and one `P(z)` per basis vector of each `V_z`, mapped onto `V` by their
/// generators.
#[derive(Clone, Debug)]
pub struct Presentation<F: Field> {
    pub summands: Vec<ProjLabel>,
    pub rep: Rep<F>,
    pub deflation: Morphism<F>,
}

pub fn projective_presentation<F: Field>(v: &Rep<F>) -> Result<Presentation<F>, ProjInjError> {
    let field = v.field();
    let p = v.poset();
    let mut summands = Vec::new();
    let mut maps = Vec::new();
    for i in 0..v.d0() {
        summands.push(ProjLabel::S);
        maps.push(morphism_from_projective(ProjLabel::S, &unit(field, v.d0(), i), v)?);
    }
    for z in 0..p.num_classes() {
        for col in v.sub(z).basis().columns() {
            summands.push(ProjLabel::P(z));
            maps.push(morphism_from_projective(ProjLabel::P(z), &col, v)?);
        }
    }
    let parts: Vec<Rep<F>> = maps.iter().map(|m| m.source().clone()).collect();
    let (rep, f0) = if parts.is_empty() {
        (Rep::zero(p.clone(), field.clone()), Matrix::zeros(field, 0, 0))
    } else {
        let ds = direct_sum_many(&parts)?;
        let f0 = maps.iter().fold(Matrix::zeros(field, v.d0(), 0), |acc, m| acc.hstack(m.matrix()));
        (ds.sum, f0)
    };
    let deflation = Morphism::new(rep.clone(), v.clone(), f0)?;
    debug_assert!(is_proper_epi(&deflation));
    Ok(Presentation { summands, rep, deflation })
}

/// A representation in quotient form: surjections `j_z : V₀^z → V_z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotRep<F: Field> {
    poset: Arc<PosetInv>,
    field: F,
    d0: usize,
    quo: Vec<Matrix<F>>,
}

impl<F: Field> QuotRep<F> {
    /// Checks surjectivity and, for `a₁ < a` with `a ∈ z`, `a₁ ∈ z₁`, that
    /// `j_{z₁} i_{a₁} π_a` factors through `j_z`.
    pub fn new(poset: Arc<PosetInv>, field: F, d0: usize, quo: Vec<Matrix<F>>) -> Result<Self, ProjInjError> {
        if quo.len() != poset.num_classes() {
            return Err(RepError::ClassCount { expected: poset.num_classes(), got: quo.len() }.into());
        }
        for (z, j) in quo.iter().enumerate() {
            let cols = d0 * poset.class_size(z);
            if j.cols() != cols {
                return Err(RepError::ShapeMismatch { expected: (j.rows(), cols), got: j.shape() }.into());
            }
            if j.rank() != j.rows() {
                return Err(ProjInjError::NotSurjective(z));
            }
        }
        let q = QuotRep { poset, field, d0, quo };
        if let Some((a1, a)) = q.incompatible_pairs().into_iter().next() {
            return Err(ProjInjError::Incompatible(q.poset.label(a1).into(), q.poset.label(a).into()));
        }
        Ok(q)
    }

    fn incompatible_pairs(&self) -> Vec<(usize, usize)> {
        let p = &self.poset;
        p.strict_pairs()
            .into_iter()
            .filter(|&(a1, a)| {
                let (z1, s1) = p.slot_of(a1);
                let (z, s) = p.slot_of(a);
                let inc = crate::rep::slot_inclusion(&self.field, self.d0, p.class_size(z1), s1);
                let pi = crate::rep::slot_projection(&self.field, self.d0, p.class_size(z), s);
                let r = self.quo[z1].mul(&inc).mul(&pi);
                !r.mul(&self.quo[z].kernel_basis()).is_zero()
            })
            .collect()
    }

    pub fn poset(&self) -> &Arc<PosetInv> {
        &self.poset
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn d0(&self) -> usize {
        self.d0
    }
    pub fn quo(&self, z: usize) -> &Matrix<F> {
        &self.quo[z]
    }
    pub fn quotient_dims(&self) -> Vec<usize> {
        self.quo.iter().map(Matrix::rows).collect()
    }

    /// Equality of every `j_z` up to an isomorphism of its target, i.e.
    /// equal row spaces.
    pub fn same_quotients(&self, other: &Self) -> bool {
        self.d0 == other.d0
            && *self.poset == *other.poset
            && self
                .quo
                .iter()
                .zip(&other.quo)
                .all(|(a, b)| a.transpose().image() == b.transpose().image())
    }
}

/// `C(V) = (V₀, coker V_z → V₀^z)`, a quotient representation of the
/// opposite poset.
pub fn to_quotient<F: Field>(v: &Rep<F>) -> QuotRep<F> {
    QuotRep {
        poset: Arc::new(v.poset().opposite()),
        field: v.field().clone(),
        d0: v.d0(),
        quo: v.subs().iter().map(Subspace::quotient_map).collect(),
    }
}

/// `K(Q) = (Q₀, ker j_z)`, a representation of the opposite poset.
pub fn from_quotient<F: Field>(q: &QuotRep<F>) -> Rep<F> {
    let sub = q.quo.iter().map(Matrix::kernel).collect();
    Rep::unchecked(Arc::new(q.poset.opposite()), q.field.clone(), q.d0, sub).expect("kernel shapes")
}

/// `D₁(V)`: the transposed inclusions `V_zᵀ`, a quotient representation of
/// the same poset on the dual space with `d_z = dim V_z`.
pub fn dual_d1<F: Field>(v: &Rep<F>) -> QuotRep<F> {
    QuotRep {
        poset: v.poset().clone(),
        field: v.field().clone(),
        d0: v.d0(),
        quo: v.subs().iter().map(|s| s.basis().transpose()).collect(),
    }
}

/// `D₂(Q)`: the images of the transposed surjections, a representation of
/// the same poset.
pub fn dual_d2<F: Field>(q: &QuotRep<F>) -> Rep<F> {
    let sub = q.quo.iter().map(|j| j.transpose().image()).collect();
    Rep::unchecked(q.poset.clone(), q.field.clone(), q.d0, sub).expect("image shapes")
}

/// `K D₁`: the representation of the opposite poset with class subspaces
/// the annihilators `V_z^⊥`.
pub fn dual_rep<F: Field>(v: &Rep<F>) -> Rep<F> {
    from_quotient(&dual_d1(v))
}

/// `K D₁` on morphisms: `f : V → W` becomes `f0ᵀ : Δ(W) → Δ(V)`.
pub fn dual_morphism<F: Field>(f: &Morphism<F>) -> Result<Morphism<F>, ProjInjError> {
    Ok(Morphism::new(dual_rep(f.target()), dual_rep(f.source()), f.matrix().transpose())?)
}

/// The injective `K D₁` of the projective of the opposite poset with the
/// same label; `S` gives `J` with `J₀ = k` and full class subspaces.
pub fn injective<F: Field>(p: &Arc<PosetInv>, field: &F, label: ProjLabel) -> Result<Rep<F>, ProjInjError> {
    let op = Arc::new(p.opposite());
    let proj = projective(&op, field, label)?;
    let inj = dual_rep(&proj);
    Ok(Rep::unchecked(p.clone(), field.clone(), inj.d0(), inj.subs().to_vec())?)
}

/// `dim Hom(X, Y)` for all projective labels `X`, `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeakTable {
    pub labels: Vec<ProjLabel>,
    pub dims: Vec<Vec<usize>>,
    pub class_sizes: Vec<usize>,
}

impl PeakTable {
    fn dim(&self, a: ProjLabel, b: ProjLabel) -> usize {
        let i = self.labels.iter().position(|&l| l == a).unwrap();
        let j = self.labels.iter().position(|&l| l == b).unwrap();
        self.dims[i][j]
    }

    /// `dim End(S) = 1` and `dim Hom(S, P(z)) = |z|` for every class.
    pub fn right_peak_holds(&self) -> bool {
        self.dim(ProjLabel::S, ProjLabel::S) == 1
            && self
                .class_sizes
                .iter()
                .enumerate()
                .all(|(z, &c)| self.dim(ProjLabel::S, ProjLabel::P(z)) == c)
    }
}

pub fn peak_dimension_table<F: Field>(p: &Arc<PosetInv>, field: &F) -> Result<PeakTable, ProjInjError> {
    let labels = projective_labels(p);
    let reps = labels.iter().map(|&l| projective(p, field, l)).collect::<Result<Vec<_>, _>>()?;
    let dims = reps
        .iter()
        .map(|a| reps.iter().map(|b| hom_matrices(a, b).map(|h| h.len())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let class_sizes = (0..p.num_classes()).map(|z| p.class_size(z)).collect();
    Ok(PeakTable { labels, dims, class_sizes })
}

/// A non-scalar endomorphism of square zero, if one is found among
/// `φ − λ` for the End basis elements `φ` and eigenvalues `λ`.
pub fn square_zero_endomorphism<F: Field>(v: &Rep<F>, rng: &mut dyn RngCore) -> Option<Matrix<F>> {
    let field = v.field();
    let id = Matrix::identity(field, v.d0());
    for phi in hom_matrices(v, v).ok()? {
        let cp = poly::charpoly(&phi);
        if let Some(l) = field.find_root(&cp, rng) {
            let n = phi.sub(&id.scale(&l));
            if !n.is_zero() && n.mul(&n).is_zero() {
                return Some(n);
            }
        }
    }
    None
}

/// Whether the presentation deflation onto `V` splits, which holds exactly
/// when `V` is projective.
pub fn presentation_splits<F: Field>(v: &Rep<F>) -> Result<bool, ProjInjError> {
    let pres = projective_presentation(v)?;
    Ok(lift_through(v, &pres.deflation, &Matrix::identity(v.field(), v.d0()))?.is_some())
}

/// `V` is injective iff its dual is projective over the opposite poset.
pub fn dual_presentation_splits<F: Field>(v: &Rep<F>) -> Result<bool, ProjInjError> {
    presentation_splits(&dual_rep(v))
}

/// Lifting test: for `trials` random deflations `E → V` out of random `E`,
/// every basis morphism `P → V` lifts to `P → E`.
pub fn lifting_test<F: Field>(p: &Rep<F>, trials: usize, max_d0: usize, rng: &mut dyn RngCore) -> Result<bool, ProjInjError> {
    use rand::Rng;
    for _ in 0..trials {
        let d0 = rng.gen_range(0..=max_d0);
        let e = Rep::random(p.poset().clone(), p.field().clone(), d0, rng);
        let v = random_deflation_from(&e, rng);
        for f in hom_matrices(p, v.target())? {
            if lift_through(p, &v, &f)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Co-lifting test: for `trials` random inflations `X → E`, every basis
/// morphism `X → I` extends to `E → I`.
pub fn colifting_test<F: Field>(i: &Rep<F>, trials: usize, max_d0: usize, rng: &mut dyn RngCore) -> Result<bool, ProjInjError> {
    use rand::Rng;
    for _ in 0..trials {
        let d0 = rng.gen_range(0..=max_d0);
        let e = Rep::random(i.poset().clone(), i.field().clone(), d0, rng);
        let u = random_inflation_into(&e, rng);
        for f in hom_matrices(u.source(), i)? {
            if extend_along(&u, i, &f)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
