//! Subspace representations of a poset with an involution, their morphisms,
//! direct sums and Hom spaces.
//!
//! A representation stores only `d0 = dim V₀` and, for each class `z`, a
//! subspace of `V₀^z = k^(d0·|z|)`. A vector of `V₀^z` is the concatenation of
//! its slot components, slot 0 first.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::exactla::{Field, LinAlgError, Matrix, Subspace};
use crate::poset::PosetInv;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("class {class}: subspace lives in k^{got}, expected k^{expected}")]
    AmbientMismatch { class: usize, expected: usize, got: usize },
    #[error("order condition fails for pairs {0:?}")]
    ValidityViolation(Vec<(String, String)>),
    #[error("representations are over different posets")]
    PosetMismatch,
    #[error("representations are over different fields")]
    FieldMismatch,
    #[error("expected {expected} class subspaces, got {got}")]
    ClassCount { expected: usize, got: usize },
    #[error("map has shape {got:?}, expected {expected:?}")]
    ShapeMismatch { expected: (usize, usize), got: (usize, usize) },
    #[error("not a morphism: image leaves the target subspace at classes {0:?}")]
    NotAMorphism(Vec<usize>),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Rep<F: Field> {
    poset: Arc<PosetInv>,
    field: F,
    d0: usize,
    sub: Vec<Subspace<F>>,
}

impl<F: Field> fmt::Debug for Rep<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rep").field("d0", &self.d0).field("dims", &self.class_dims()).finish()
    }
}

/// `π_x`: the slot-`slot` block of `V₀^z`.
pub fn slot_projection<F: Field>(field: &F, d0: usize, class_size: usize, slot: usize) -> Matrix<F> {
    Matrix::from_fn(field, d0, d0 * class_size, |r, c| {
        if c == slot * d0 + r {
            field.one()
        } else {
            field.zero()
        }
    })
}

/// `i_x`: `V₀` into slot `slot` of `V₀^z`.
pub fn slot_inclusion<F: Field>(field: &F, d0: usize, class_size: usize, slot: usize) -> Matrix<F> {
    slot_projection(field, d0, class_size, slot).transpose()
}

impl<F: Field> Rep<F> {
    /// Checks ambient dimensions and the order condition.
    pub fn new(poset: Arc<PosetInv>, field: F, d0: usize, sub: Vec<Subspace<F>>) -> Result<Self, RepError> {
        let rep = Self::unchecked(poset, field, d0, sub)?;
        let bad = rep.violations();
        if !bad.is_empty() {
            let named = bad
                .into_iter()
                .map(|(x, y)| (rep.poset.label(x).to_string(), rep.poset.label(y).to_string()))
                .collect();
            return Err(RepError::ValidityViolation(named));
        }
        Ok(rep)
    }

    /// Checks ambient dimensions only.
    pub fn unchecked(poset: Arc<PosetInv>, field: F, d0: usize, sub: Vec<Subspace<F>>) -> Result<Self, RepError> {
        if sub.len() != poset.num_classes() {
            return Err(RepError::ClassCount { expected: poset.num_classes(), got: sub.len() });
        }
        for (z, s) in sub.iter().enumerate() {
            let expected = d0 * poset.class_size(z);
            if s.ambient() != expected {
                return Err(RepError::AmbientMismatch { class: z, expected, got: s.ambient() });
            }
        }
        Ok(Rep { poset, field, d0, sub })
    }

    /// Builds each class subspace from spanning columns.
    pub fn from_columns(poset: Arc<PosetInv>, field: F, d0: usize, columns: Vec<Vec<Vec<F::Elem>>>) -> Result<Self, RepError> {
        if columns.len() != poset.num_classes() {
            return Err(RepError::ClassCount { expected: poset.num_classes(), got: columns.len() });
        }
        let mut sub = Vec::with_capacity(columns.len());
        for (z, cols) in columns.iter().enumerate() {
            let amb = d0 * poset.class_size(z);
            if let Some(c) = cols.iter().find(|c| c.len() != amb) {
                return Err(RepError::AmbientMismatch { class: z, expected: amb, got: c.len() });
            }
            sub.push(Subspace::from_vectors(&field, amb, cols));
        }
        Self::new(poset, field, d0, sub)
    }

    /// `V₀ = k^d0` with every class subspace zero.
    pub fn trivial(poset: Arc<PosetInv>, field: F, d0: usize) -> Self {
        let sub = (0..poset.num_classes())
            .map(|z| Subspace::zero(&field, d0 * poset.class_size(z)))
            .collect();
        Rep { poset, field, d0, sub }
    }

    pub fn zero(poset: Arc<PosetInv>, field: F) -> Self {
        Self::trivial(poset, field, 0)
    }

    /// `V₀ = k^d0` with every class subspace full.
    pub fn full(poset: Arc<PosetInv>, field: F, d0: usize) -> Self {
        let sub = (0..poset.num_classes())
            .map(|z| Subspace::full(&field, d0 * poset.class_size(z)))
            .collect();
        Rep { poset, field, d0, sub }
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
    pub fn sub(&self, z: usize) -> &Subspace<F> {
        &self.sub[z]
    }
    pub fn subs(&self) -> &[Subspace<F>] {
        &self.sub
    }
    pub fn class_dims(&self) -> Vec<usize> {
        self.sub.iter().map(Subspace::dim).collect()
    }

    /// `(dim V₀, dim V_z for each z)`; an isomorphism invariant.
    pub fn dim_vector(&self) -> (usize, Vec<usize>) {
        (self.d0, self.class_dims())
    }

    pub fn is_zero(&self) -> bool {
        self.d0 == 0
    }

    pub fn same_poset(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.poset, &other.poset) || *self.poset == *other.poset
    }

    fn check_compatible(&self, other: &Self) -> Result<(), RepError> {
        if !self.same_poset(other) {
            return Err(RepError::PosetMismatch);
        }
        if self.field != other.field {
            return Err(RepError::FieldMismatch);
        }
        Ok(())
    }

    /// `V⁺_x = π_x(V_[x])`.
    pub fn plus_space(&self, x: usize) -> Subspace<F> {
        let (z, slot) = self.poset.slot_of(x);
        let pi = slot_projection(&self.field, self.d0, self.poset.class_size(z), slot);
        self.sub[z].image_under(&pi).expect("projection shape")
    }

    /// `V⁻_x = i_x⁻¹(V_[x])`.
    pub fn minus_space(&self, x: usize) -> Subspace<F> {
        let (z, slot) = self.poset.slot_of(x);
        let inc = slot_inclusion(&self.field, self.d0, self.poset.class_size(z), slot);
        self.sub[z].preimage(&inc).expect("inclusion shape")
    }

    /// Comparable pairs `x < y` with `V⁺_x ⊄ V⁻_y`.
    pub fn violations(&self) -> Vec<(usize, usize)> {
        let n = self.poset.len();
        let plus: Vec<_> = (0..n).map(|x| self.plus_space(x)).collect();
        let minus: Vec<_> = (0..n).map(|x| self.minus_space(x)).collect();
        self.poset
            .strict_pairs()
            .into_iter()
            .filter(|&(x, y)| !minus[y].contains_subspace(&plus[x]))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// The isomorphic copy `g·V` for an invertible `g`; `g` itself is then an
    /// isomorphism `V → g·V`.
    pub fn transport(&self, g: &Matrix<F>) -> Self {
        assert_eq!(g.shape(), (self.d0, self.d0), "transport by a non-square map");
        let sub = self
            .sub
            .iter()
            .enumerate()
            .map(|(z, s)| s.image_under(&g.kron_identity(self.poset.class_size(z))).unwrap())
            .collect();
        Rep { sub, ..self.clone() }
    }

    /// The subrepresentation carried by the columns of `basis` (an injective
    /// `d0 × m` matrix), in the coordinates of those columns: the class
    /// subspaces are `(I ⊗ basis)⁻¹(V_z)`.
    pub fn restrict_to(&self, basis: &Matrix<F>) -> Self {
        assert_eq!(basis.rows(), self.d0, "restriction basis rows");
        let sub = self
            .sub
            .iter()
            .enumerate()
            .map(|(z, s)| s.preimage(&basis.kron_identity(self.poset.class_size(z))).unwrap())
            .collect();
        Rep { poset: self.poset.clone(), field: self.field.clone(), d0: basis.cols(), sub }
    }

    /// The smallest valid representation on `k^d0` whose class subspaces
    /// contain the given generators: the order condition is imposed by
    /// repeatedly adding `i_y(V⁺_x)` to `V_[y]` for every `x < y`.
    pub fn closure_of(poset: Arc<PosetInv>, field: F, d0: usize, generators: Vec<Vec<Vec<F::Elem>>>) -> Self {
        let mut sub: Vec<Subspace<F>> = generators
            .iter()
            .enumerate()
            .map(|(z, g)| Subspace::from_vectors(&field, d0 * poset.class_size(z), g))
            .collect();
        let pairs = poset.strict_pairs();
        loop {
            let mut changed = false;
            for &(x, y) in &pairs {
                let (zx, sx) = poset.slot_of(x);
                let (zy, sy) = poset.slot_of(y);
                let pi = slot_projection(&field, d0, poset.class_size(zx), sx);
                let inc = slot_inclusion(&field, d0, poset.class_size(zy), sy);
                let pushed = sub[zx].image_under(&inc.mul(&pi)).unwrap();
                if !sub[zy].contains_subspace(&pushed) {
                    sub[zy] = sub[zy].sum(&pushed).unwrap();
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Rep { poset, field, d0, sub }
    }

    /// A seeded random valid representation: a few random (often sparse)
    /// generators per class, closed under the order condition.
    pub fn random(poset: Arc<PosetInv>, field: F, d0: usize, rng: &mut dyn RngCore) -> Self {
        let gens = (0..poset.num_classes())
            .map(|z| {
                let amb = d0 * poset.class_size(z);
                let count = rng.gen_range(0..=amb.min(d0 + 1));
                let sparse = rng.gen_bool(0.5);
                (0..count)
                    .map(|_| {
                        (0..amb)
                            .map(|_| {
                                if sparse && rng.gen_bool(0.6) {
                                    field.zero()
                                } else {
                                    field.random(rng)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::closure_of(poset, field, d0, gens)
    }
}

impl<F: Field> fmt::Display for Rep<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "dim V0 = {}", self.d0)?;
        for (z, s) in self.sub.iter().enumerate() {
            let labels = self.poset.class_labels()[z].join(",");
            write!(out, "  V_({labels}) dim {}:", s.dim())?;
            for c in s.basis().columns() {
                let parts: Vec<String> = c
                    .chunks(self.d0.max(1))
                    .map(|blk| blk.iter().map(|a| self.field.format(a)).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(out, " ({})", parts.join(" ; "))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Outcome of a morphism check: the classes where `φ^z(V_z) ⊄ W_z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismCheck {
    pub failing_classes: Vec<usize>,
}

impl MorphismCheck {
    pub fn holds(&self) -> bool {
        self.failing_classes.is_empty()
    }
}

/// Checks `φ^z(V_z) ⊆ W_z` for every class `z`.
pub fn is_morphism<F: Field>(v: &Rep<F>, w: &Rep<F>, f0: &Matrix<F>) -> Result<MorphismCheck, RepError> {
    v.check_compatible(w)?;
    if f0.shape() != (w.d0, v.d0) {
        return Err(RepError::ShapeMismatch { expected: (w.d0, v.d0), got: f0.shape() });
    }
    let failing_classes = (0..v.poset.num_classes())
        .filter(|&z| {
            let s = v.poset.class_size(z);
            let img = f0.kron_identity(s).mul(v.sub[z].basis());
            !img.columns().iter().all(|c| w.sub[z].contains(c))
        })
        .collect();
    Ok(MorphismCheck { failing_classes })
}

/// A morphism `V → W` given by its linear map `f0 : V₀ → W₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<F: Field> {
    source: Rep<F>,
    target: Rep<F>,
    f0: Matrix<F>,
}

impl<F: Field> Morphism<F> {
    pub fn new(source: Rep<F>, target: Rep<F>, f0: Matrix<F>) -> Result<Self, RepError> {
        let check = is_morphism(&source, &target, &f0)?;
        if !check.holds() {
            return Err(RepError::NotAMorphism(check.failing_classes));
        }
        Ok(Morphism { source, target, f0 })
    }

    /// For maps known to be morphisms by construction.
    pub(crate) fn trusted(source: Rep<F>, target: Rep<F>, f0: Matrix<F>) -> Self {
        debug_assert!(is_morphism(&source, &target, &f0).map(|c| c.holds()).unwrap_or(false));
        Morphism { source, target, f0 }
    }

    pub fn identity(v: &Rep<F>) -> Self {
        Morphism { source: v.clone(), target: v.clone(), f0: Matrix::identity(v.field(), v.d0()) }
    }

    pub fn zero(v: &Rep<F>, w: &Rep<F>) -> Self {
        Morphism { source: v.clone(), target: w.clone(), f0: Matrix::zeros(v.field(), w.d0(), v.d0()) }
    }

    pub fn source(&self) -> &Rep<F> {
        &self.source
    }
    pub fn target(&self) -> &Rep<F> {
        &self.target
    }
    pub fn matrix(&self) -> &Matrix<F> {
        &self.f0
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Result<Self, RepError> {
        if other.source.d0() != self.target.d0() || !self.target.same_poset(&other.source) {
            return Err(RepError::ShapeMismatch {
                expected: (other.f0.rows(), self.target.d0()),
                got: other.f0.shape(),
            });
        }
        Ok(Morphism { source: self.source.clone(), target: other.target.clone(), f0: other.f0.mul(&self.f0) })
    }

    /// `φ^z = I_|z| ⊗ f0`.
    pub fn class_map(&self, z: usize) -> Matrix<F> {
        self.f0.kron_identity(self.source.poset.class_size(z))
    }

    /// `φ^z(V_z)`.
    pub fn image_at(&self, z: usize) -> Subspace<F> {
        self.source.sub(z).image_under(&self.class_map(z)).unwrap()
    }

    pub fn is_isomorphism(&self) -> bool {
        match self.f0.inverse() {
            Some(inv) => is_morphism(&self.target, &self.source, &inv).map(|c| c.holds()).unwrap_or(false),
            None => false,
        }
    }
}

/// `V ⊕ W` with its canonical inclusions and projections. Coordinates of
/// `V₀` come first; within each class the slot stacking is preserved.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub sum: Rep<F>,
    pub inclusions: Vec<Morphism<F>>,
    pub projections: Vec<Morphism<F>>,
}

pub fn direct_sum<F: Field>(v: &Rep<F>, w: &Rep<F>) -> Result<DirectSum<F>, RepError> {
    direct_sum_many(&[v.clone(), w.clone()])
}

pub fn direct_sum_many<F: Field>(parts: &[Rep<F>]) -> Result<DirectSum<F>, RepError> {
    let first = parts.first().expect("direct sum of no summands");
    for p in parts {
        first.check_compatible(p)?;
    }
    let field = first.field.clone();
    let poset = first.poset.clone();
    let total: usize = parts.iter().map(Rep::d0).sum();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for p in parts {
        offsets.push(acc);
        acc += p.d0();
    }
    let embed = |i: usize| {
        Matrix::from_fn(&field, total, parts[i].d0(), |r, c| {
            if r == offsets[i] + c {
                field.one()
            } else {
                field.zero()
            }
        })
    };
    let sub = (0..poset.num_classes())
        .map(|z| {
            let s = poset.class_size(z);
            let mut gens = Matrix::zeros(&field, total * s, 0);
            for (i, p) in parts.iter().enumerate() {
                gens = gens.hstack(&embed(i).kron_identity(s).mul(p.sub(z).basis()));
            }
            Subspace::span(&gens)
        })
        .collect();
    let sum = Rep { poset, field: field.clone(), d0: total, sub };
    let inclusions = (0..parts.len()).map(|i| Morphism::trusted(parts[i].clone(), sum.clone(), embed(i))).collect();
    let projections = (0..parts.len())
        .map(|i| Morphism::trusted(sum.clone(), parts[i].clone(), embed(i).transpose()))
        .collect();
    Ok(DirectSum { sum, inclusions, projections })
}

/// Basis of the space of maps `f0 : V₀ → W₀` with `φ^z(V_z) ⊆ W_z` for
/// every class, as matrices in canonical (echelon) order of their row-major
/// entries.
pub fn hom_matrices<F: Field>(v: &Rep<F>, w: &Rep<F>) -> Result<Vec<Matrix<F>>, RepError> {
    v.check_compatible(w)?;
    let f = &v.field;
    let (dv, dw) = (v.d0, w.d0);
    let unknowns = dv * dw;
    let mut eqs: Vec<Vec<F::Elem>> = Vec::new();
    for z in 0..v.poset.num_classes() {
        let s = v.poset.class_size(z);
        let ann = w.sub(z).annihilator();
        if ann.rows() == 0 {
            continue;
        }
        for col in v.sub(z).basis().columns() {
            for y in 0..ann.rows() {
                let yrow = ann.row(y);
                let mut eq = vec![f.zero(); unknowns];
                for j in 0..s {
                    for r in 0..dw {
                        let coef = &yrow[j * dw + r];
                        if f.is_zero(coef) {
                            continue;
                        }
                        for c in 0..dv {
                            let t = f.mul(coef, &col[j * dv + c]);
                            eq[r * dv + c] = f.add(&eq[r * dv + c], &t);
                        }
                    }
                }
                if eq.iter().any(|e| !f.is_zero(e)) {
                    eqs.push(eq);
                }
            }
        }
    }
    let system = if eqs.is_empty() {
        Matrix::zeros(f, 0, unknowns)
    } else {
        Matrix::from_rows(f, eqs)?
    };
    let sol = system.kernel();
    Ok(sol
        .basis()
        .columns()
        .into_iter()
        .map(|x| Matrix::from_fn(f, dw, dv, |r, c| x[r * dv + c].clone()))
        .collect())
}

pub fn hom_basis<F: Field>(v: &Rep<F>, w: &Rep<F>) -> Result<Vec<Morphism<F>>, RepError> {
    Ok(hom_matrices(v, w)?
        .into_iter()
        .map(|m| Morphism::trusted(v.clone(), w.clone(), m))
        .collect())
}

pub fn hom_dim<F: Field>(v: &Rep<F>, w: &Rep<F>) -> Result<usize, RepError> {
    Ok(hom_matrices(v, w)?.len())
}

pub fn end_dim<F: Field>(v: &Rep<F>) -> usize {
    hom_dim(v, v).expect("a representation is compatible with itself")
}

/// Coefficients `c` with `Σ cᵢ·spanᵢ = target`, if any.
pub fn express_in_span<F: Field>(span: &[Matrix<F>], target: &Matrix<F>) -> Option<Vec<F::Elem>> {
    let f = target.field();
    let n = target.rows() * target.cols();
    if span.is_empty() {
        return target.is_zero().then(Vec::new);
    }
    let a = Matrix::from_fn(f, n, span.len(), |r, c| span[c].entries()[r].clone());
    a.solve(target.entries()).ok().flatten()
}

pub fn linear_combination<F: Field>(field: &F, basis: &[Matrix<F>], coeffs: &[F::Elem], rows: usize, cols: usize) -> Matrix<F> {
    basis
        .iter()
        .zip(coeffs)
        .fold(Matrix::zeros(field, rows, cols), |acc, (m, c)| acc.add(&m.scale(c)))
}

/// Some `h ∈ Hom(P, E)` with `g ∘ h = f`, where `g : E → V` and `f : P → V`.
pub fn lift_through<F: Field>(p: &Rep<F>, g: &Morphism<F>, f: &Matrix<F>) -> Result<Option<Matrix<F>>, RepError> {
    let hs = hom_matrices(p, g.source())?;
    let composed: Vec<Matrix<F>> = hs.iter().map(|h| g.matrix().mul(h)).collect();
    Ok(express_in_span(&composed, f)
        .map(|c| linear_combination(p.field(), &hs, &c, g.source().d0(), p.d0())))
}

/// Some `h ∈ Hom(E, I)` with `h ∘ u = f`, where `u : V → E` and `f : V → I`.
pub fn extend_along<F: Field>(u: &Morphism<F>, i: &Rep<F>, f: &Matrix<F>) -> Result<Option<Matrix<F>>, RepError> {
    let hs = hom_matrices(u.target(), i)?;
    let composed: Vec<Matrix<F>> = hs.iter().map(|h| h.mul(u.matrix())).collect();
    Ok(express_in_span(&composed, f)
        .map(|c| linear_combination(i.field(), &hs, &c, i.d0(), u.target().d0())))
}

/// A seeded random element of `Hom(V, W)`.
pub fn random_morphism<F: Field>(v: &Rep<F>, w: &Rep<F>, rng: &mut dyn RngCore) -> Result<Morphism<F>, RepError> {
    let basis = hom_matrices(v, w)?;
    let coeffs: Vec<F::Elem> = basis.iter().map(|_| v.field.random(rng)).collect();
    let f0 = linear_combination(&v.field, &basis, &coeffs, w.d0, v.d0);
    Ok(Morphism::trusted(v.clone(), w.clone(), f0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn example_two_poset() -> Arc<PosetInv> {
        Arc::new(
            PosetInv::build(
                &["a", "a*", "b", "b*"],
                &[("a", "b*"), ("a*", "b"), ("a*", "b*")],
                &[vec!["a", "a*"], vec!["b", "b*"]],
            )
            .unwrap(),
        )
    }

    fn example_two<F: Field>(f: &F) -> Result<Rep<F>, RepError> {
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        Rep::from_columns(
            example_two_poset(),
            f.clone(),
            3,
            vec![
                vec![v(&[1, 0, 0, 0, 1, 0])],
                vec![v(&[0, 1, 0, 0, 0, 0]), v(&[0, 0, 0, 1, 0, 0]), v(&[0, 0, 0, 0, 1, 0]), v(&[0, 0, 1, 0, 0, 1])],
            ],
        )
    }

    #[test]
    fn example_two_is_valid_over_both_fields() {
        let r = example_two(&gf()).unwrap();
        let p = r.poset().clone();
        let e = |l| p.index_of(l).unwrap();
        assert_eq!(r.plus_space(e("a")).dim(), 1);
        assert_eq!(r.minus_space(e("b")).dim(), 1);
        assert_eq!(r.minus_space(e("b*")).dim(), 2);
        assert!(example_two(&crate::exactla::Rationals).is_ok());
    }

    #[test]
    fn zero_subspaces_are_always_valid() {
        let p = example_two_poset();
        assert!(Rep::trivial(p.clone(), gf(), 3).is_valid());
        assert!(Rep::full(p, gf(), 2).is_valid());
    }

    #[test]
    fn invalid_on_u1() {
        let p = Arc::new(PosetInv::make_un(1).unwrap());
        let err = Rep::from_columns(p, gf(), 1, vec![vec![vec![1, 0]]]).unwrap_err();
        assert_eq!(err, RepError::ValidityViolation(vec![("a1".into(), "b1".into())]));
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let p = Arc::new(PosetInv::make_un(1).unwrap());
        let err = Rep::from_columns(p, gf(), 2, vec![vec![vec![1, 0]]]).unwrap_err();
        assert!(matches!(err, RepError::AmbientMismatch { class: 0, expected: 4, got: 2 }));
    }

    #[test]
    fn direct_sum_with_zero_and_dimensions() {
        let r = example_two(&gf()).unwrap();
        let z = Rep::zero(r.poset().clone(), gf());
        let s = direct_sum(&r, &z).unwrap();
        assert_eq!(s.sum, r);
        let rr = direct_sum(&r, &r).unwrap();
        assert_eq!(rr.sum.d0(), 6);
        assert_eq!(rr.sum.class_dims(), vec![2, 8]);
        assert!(rr.sum.is_valid());
        for m in rr.inclusions.iter().chain(&rr.projections) {
            assert!(is_morphism(m.source(), m.target(), m.matrix()).unwrap().holds());
        }
    }

    #[test]
    fn identity_and_zero_are_morphisms() {
        let r = example_two(&gf()).unwrap();
        assert!(is_morphism(&r, &r, &Matrix::identity(&gf(), 3)).unwrap().holds());
        assert!(is_morphism(&r, &r, &Matrix::zeros(&gf(), 3, 3)).unwrap().holds());
        assert!(matches!(
            is_morphism(&r, &r, &Matrix::zeros(&gf(), 2, 3)),
            Err(RepError::ShapeMismatch { .. })
        ));
        assert_eq!(end_dim(&Rep::trivial(r.poset().clone(), gf(), 1)), 1);
    }

    // Brute-force oracle over GF(3): count every linear map and keep the
    // morphisms; the count must be 3^dim Hom.
    #[test]
    fn hom_dimension_matches_enumeration_over_gf3() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = Arc::new(PosetInv::make_un(2).unwrap());
        for _ in 0..30 {
            let v = Rep::random(p.clone(), f, rng.gen_range(0..3), &mut rng);
            let w = Rep::random(p.clone(), f, rng.gen_range(0..3), &mut rng);
            let n = v.d0() * w.d0();
            let mut count = 0u64;
            for code in 0..3u64.pow(n as u32) {
                let mut c = code;
                let m = Matrix::from_fn(&f, w.d0(), v.d0(), |_, _| {
                    let d = c % 3;
                    c /= 3;
                    d
                });
                if is_morphism(&v, &w, &m).unwrap().holds() {
                    count += 1;
                }
            }
            assert_eq!(count, 3u64.pow(hom_dim(&v, &w).unwrap() as u32));
        }
    }

    #[test]
    fn random_reps_are_valid_and_hom_bases_are_morphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = example_two_poset();
        for _ in 0..40 {
            let v = Rep::random(p.clone(), gf(), rng.gen_range(0..4), &mut rng);
            let w = Rep::random(p.clone(), gf(), rng.gen_range(0..4), &mut rng);
            assert!(v.is_valid() && w.is_valid());
            let basis = hom_basis(&v, &w).unwrap();
            for m in &basis {
                assert!(is_morphism(&v, &w, m.matrix()).unwrap().holds());
            }
            let ends = hom_basis(&w, &w).unwrap();
            if let (Some(a), Some(b)) = (basis.first(), ends.last()) {
                assert!(Morphism::new(v.clone(), w.clone(), b.matrix().mul(a.matrix())).is_ok());
            }
        }
    }

    #[test]
    fn transport_gives_an_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = example_two(&gf()).unwrap();
        let g = Matrix::random_invertible(&gf(), 3, &mut rng);
        let t = r.transport(&g);
        assert!(t.is_valid());
        assert!(Morphism::new(r.clone(), t, g).unwrap().is_isomorphism());
    }
}
