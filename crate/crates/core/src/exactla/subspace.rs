use super::field::Field;
use super::matrix::Matrix;
use super::LinAlgError;

/// A subspace of `k^ambient` stored by its canonical basis: reduced column
/// echelon form with leading-one pivots in ascending rows. Two values are
/// equal exactly when they describe the same subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Canonical basis of the column space of `m`.
    pub fn span(m: &Matrix<F>) -> Self {
        let (r, pivots) = m.transpose().rref();
        let basis = r.row_range(0, pivots.len()).transpose();
        // A zero-column matrix loses its row count through the transposes.
        let basis = if basis.rows() == m.rows() { basis } else { Matrix::zeros(m.field(), m.rows(), 0) };
        Subspace { basis, pivots }
    }

    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, ambient, 0), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        Subspace { basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    pub fn from_vectors(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Self {
        Self::span(&Matrix::from_columns(field, ambient, vectors))
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }

    /// `ambient × dim` canonical basis matrix.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    /// Row index of the leading one of each basis column.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Standard coordinates not used as pivots; they span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient()).filter(|i| !self.pivots.contains(i)).collect()
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinAlgError> {
        if self.ambient() != other.ambient() {
            return Err(LinAlgError::AmbientMismatch(self.ambient(), other.ambient()));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient(), "vector length");
        // Reduce against the pivot rows; what remains must vanish.
        let f = self.field();
        let mut r = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = r[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for i in 0..r.len() {
                r[i] = f.sub(&r[i], &f.mul(&c, self.basis.get(i, k)));
            }
        }
        r.iter().all(|x| f.is_zero(x))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.ambient() == self.ambient() && other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.check_ambient(other)?;
        Ok(Self::span(&self.basis.hstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.check_ambient(other)?;
        // (x, y) with S x = T y.
        let stacked = self.basis.hstack(&other.basis.neg());
        let k = stacked.kernel_basis();
        let coeffs = k.row_range(0, self.dim());
        Ok(Self::span(&self.basis.mul(&coeffs)))
    }

    /// Rows of a matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> Matrix<F> {
        self.basis.transpose().kernel_basis().transpose()
    }

    /// `{x | m·x ∈ self}`.
    pub fn preimage(&self, m: &Matrix<F>) -> Result<Self, LinAlgError> {
        if m.rows() != self.ambient() {
            return Err(LinAlgError::DimensionMismatch(format!(
                "preimage under a map with {} rows into ambient {}",
                m.rows(),
                self.ambient()
            )));
        }
        if self.is_full() {
            return Ok(Self::full(self.field(), m.cols()));
        }
        Ok(self.annihilator().mul(m).kernel())
    }

    /// Image under `m`.
    pub fn image_under(&self, m: &Matrix<F>) -> Result<Self, LinAlgError> {
        Ok(Self::span(&m.try_mul(&self.basis)?))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// The quotient map `k^ambient → k^(ambient − dim)` onto the non-pivot
    /// coordinates, with kernel exactly this subspace.
    pub fn quotient_map(&self) -> Matrix<F> {
        let f = self.field().clone();
        let np = self.non_pivots();
        let mut q = Matrix::zeros(&f, np.len(), self.ambient());
        for (row, &n) in np.iter().enumerate() {
            q.set(row, n, f.one());
            for (k, &p) in self.pivots.iter().enumerate() {
                q.set(row, p, f.neg(self.basis.get(n, k)));
            }
        }
        q
    }
}

/// Free-function forms of the subspace operations.
pub fn subspace_intersect<F: Field>(s: &Subspace<F>, t: &Subspace<F>) -> Result<Subspace<F>, LinAlgError> {
    s.intersect(t)
}

pub fn subspace_preimage<F: Field>(m: &Matrix<F>, s: &Subspace<F>) -> Result<Subspace<F>, LinAlgError> {
    s.preimage(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::field::{PrimeField, Rationals};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn e(f: &PrimeField, n: usize, i: usize) -> Vec<u64> {
        (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()
    }

    #[test]
    fn echelonize_examples() {
        let f = gf();
        assert!(Subspace::span(&Matrix::identity(&f, 3)).is_full());
        let q = Rationals;
        let s = Subspace::span(&Matrix::from_ints(&q, &[&[1, 2], &[2, 4]]));
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis().column(0), vec![q.from_i64(1), q.from_i64(2)]);
        let g5 = PrimeField::new(5).unwrap();
        let s = Subspace::span(&Matrix::from_ints(&g5, &[&[2], &[4]]));
        assert_eq!(s.basis().column(0), vec![1, 2]);
    }

    #[test]
    fn intersect_examples() {
        let f = gf();
        let e1 = Subspace::from_vectors(&f, 2, &[e(&f, 2, 0)]);
        let e2 = Subspace::from_vectors(&f, 2, &[e(&f, 2, 1)]);
        assert_eq!(e1.intersect(&e1).unwrap(), e1);
        assert!(e1.intersect(&e2).unwrap().is_zero());
        let a = Subspace::from_vectors(&f, 3, &[e(&f, 3, 0), e(&f, 3, 1)]);
        let b = Subspace::from_vectors(&f, 3, &[e(&f, 3, 1), e(&f, 3, 2)]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::from_vectors(&f, 3, &[e(&f, 3, 1)]));
        assert!(matches!(a.intersect(&e1), Err(LinAlgError::AmbientMismatch(3, 2))));
    }

    #[test]
    fn preimage_examples() {
        let f = gf();
        let m = Matrix::from_ints(&f, &[&[1, 0]]);
        assert!(Subspace::full(&f, 1).preimage(&m).unwrap().is_full());
        let s = Subspace::from_vectors(&f, 2, &[vec![1, 1]]);
        assert_eq!(s.preimage(&Matrix::identity(&f, 2)).unwrap(), s);
        let p = Subspace::zero(&f, 1).preimage(&m).unwrap();
        assert_eq!(p, Subspace::from_vectors(&f, 2, &[e(&f, 2, 1)]));
        assert!(s.preimage(&m).is_err());
    }

    #[test]
    fn quotient_map_has_the_subspace_as_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = gf();
        for _ in 0..50 {
            let m = Matrix::random_sparse(&f, 5, 3, &mut rng);
            let s = Subspace::span(&m);
            let q = s.quotient_map();
            assert_eq!(q.rows(), 5 - s.dim());
            assert_eq!(q.kernel(), s);
            // Identity on the complement coordinates.
            let np = s.non_pivots();
            assert!(q.select_cols(&np).is_identity());
        }
    }

    proptest! {
        #[test]
        fn echelonize_is_basis_independent(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = gf();
            let m = Matrix::random_sparse(&f, rows, cols, &mut rng);
            let g = Matrix::random_invertible(&f, cols, &mut rng);
            let s = Subspace::span(&m);
            prop_assert_eq!(&Subspace::span(&m.mul(&g)), &s);
            prop_assert_eq!(&Subspace::span(s.basis()), &s);
        }

        #[test]
        fn intersection_dimension_formula(seed in any::<u64>(), n in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = gf();
            let s = Subspace::span(&Matrix::random_sparse(&f, n, n / 2 + 1, &mut rng));
            let t = Subspace::span(&Matrix::random_sparse(&f, n, n / 2, &mut rng));
            let i = s.intersect(&t).unwrap();
            let sum = s.sum(&t).unwrap();
            prop_assert_eq!(i.dim() + sum.dim(), s.dim() + t.dim());
            prop_assert!(s.contains_subspace(&i) && t.contains_subspace(&i));
        }

        #[test]
        fn preimage_membership(seed in any::<u64>(), n in 1usize..6, m in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = gf();
            let a = Matrix::random_sparse(&f, n, m, &mut rng);
            let s = Subspace::span(&Matrix::random_sparse(&f, n, 2, &mut rng));
            let pre = s.preimage(&a).unwrap();
            for c in pre.basis().columns() {
                prop_assert!(s.contains(&a.mul_vec(&c)));
            }
            // Anything mapping into s is in the preimage.
            let x: Vec<u64> = (0..m).map(|_| f.random(&mut rng)).collect();
            prop_assert_eq!(pre.contains(&x), s.contains(&a.mul_vec(&x)));
        }
    }
}
