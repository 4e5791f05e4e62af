use std::fmt;

use rand::{Rng, RngCore};

use super::field::Field;
use super::subspace::Subspace;
use super::LinAlgError;

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinAlgError::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix {
            field: field.clone(),
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer rows; handy for small literal data.
    pub fn from_ints(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(field, rows.len(), cols, |r, c| field.from_i64(rows[r][c]))
    }

    /// Matrix whose columns are the given vectors, with an explicit row count
    /// so that an empty list still has a shape.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(field, rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn column_vector(field: &F, v: &[F::Elem]) -> Self {
        Self::from_fn(field, v.len(), 1, |r, _| v[r].clone())
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// Panics on a shape mismatch; use [`Matrix::try_mul`] for checked products.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix product shape")
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Self {
        assert_eq!(self.shape(), other.shape(), "elementwise shape");
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.field.mul(a, s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn pow(&self, mut e: usize) -> Self {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Self::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(&self.field, self.rows)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row count");
        Self::from_fn(&self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column count");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let f = &self.field;
        Self::from_fn(f, self.rows + other.rows, self.cols + other.cols, |r, c| {
            match (r < self.rows, c < self.cols) {
                (true, true) => self.get(r, c).clone(),
                (false, false) => other.get(r - self.rows, c - self.cols).clone(),
                _ => f.zero(),
            }
        })
    }

    /// `I_s ⊗ self`: the same map applied independently to each of `s` stacked blocks.
    pub fn kron_identity(&self, s: usize) -> Self {
        let f = &self.field;
        Self::from_fn(f, self.rows * s, self.cols * s, |r, c| {
            if r / self.rows == c / self.cols {
                self.get(r % self.rows, c % self.cols).clone()
            } else {
                f.zero()
            }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(&self.field, idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn row_range(&self, start: usize, end: usize) -> Self {
        self.select_rows(&(start..end).collect::<Vec<_>>())
    }

    pub fn col_range(&self, start: usize, end: usize) -> Self {
        self.select_cols(&(start..end).collect::<Vec<_>>())
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).unwrap();
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || f.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space basis as the columns of a `cols × nullity` matrix, one
    /// column per free variable, in increasing free-variable order.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    pub fn kernel(&self) -> Subspace<F> {
        Subspace::span(&self.kernel_basis())
    }

    pub fn image(&self) -> Subspace<F> {
        Subspace::span(self)
    }

    /// Some `x` with `self · x = b`, with free variables set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, LinAlgError> {
        if b.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let aug = self.hstack(&Self::column_vector(f, b));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n].iter().any(|&p| p >= n) {
            return None;
        }
        Some(r.col_range(n, 2 * n))
    }

    pub fn random(field: &F, rows: usize, cols: usize, rng: &mut dyn RngCore) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    /// Roughly half the entries zero, the rest random.
    pub fn random_sparse(field: &F, rows: usize, cols: usize, rng: &mut dyn RngCore) -> Self {
        Self::from_fn(field, rows, cols, |_, _| {
            if rng.gen_bool(0.5) {
                field.zero()
            } else {
                field.random(rng)
            }
        })
    }

    pub fn random_invertible(field: &F, n: usize, rng: &mut dyn RngCore) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(out, "[{}x{}]", self.rows, self.cols);
        }
        let cells: Vec<String> = self.data.iter().map(|a| self.field.format(a)).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            write!(out, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(out, " ")?;
                }
                write!(out, "{:>width$}", cells[r * self.cols + c])?;
            }
            writeln!(out, "]")?;
        }
        Ok(())
    }
}

/// Convenience wrapper matching the free-function form of the solver.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, LinAlgError> {
    a.solve(b)
}

/// Canonical column space of `m`.
pub fn echelonize<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    Subspace::span(m)
}

pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    m.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::field::{PrimeField, Rationals};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn solve_examples() {
        let q = Rationals;
        let a = Matrix::from_ints(&q, &[&[1, 1], &[2, 2]]);
        let b3: Vec<_> = [1, 3].iter().map(|&v| q.from_i64(v)).collect();
        assert_eq!(a.solve(&b3).unwrap(), None);
        let b2: Vec<_> = [1, 2].iter().map(|&v| q.from_i64(v)).collect();
        assert_eq!(a.solve(&b2).unwrap(), Some(vec![q.one(), q.zero()]));
        let id = Matrix::identity(&q, 3);
        let b: Vec<_> = [4, -1, 7].iter().map(|&v| q.from_i64(v)).collect();
        assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));
        assert!(matches!(a.solve(&b), Err(LinAlgError::DimensionMismatch(_))));
    }

    #[test]
    fn kernel_examples() {
        let f = gf(5);
        assert_eq!(Matrix::zeros(&f, 2, 2).kernel().dim(), 2);
        assert_eq!(Matrix::identity(&f, 3).kernel().dim(), 0);
        let k = Matrix::from_ints(&f, &[&[1, 1]]).kernel();
        assert_eq!(k.basis().column(0), vec![1, 4]);
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = gf(101);
        for n in 0..6 {
            let m = Matrix::random_invertible(&f, n, &mut rng);
            let inv = m.inverse().unwrap();
            assert!(m.mul(&inv).is_identity());
        }
        assert!(Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kron_identity_acts_blockwise() {
        let f = gf(7);
        let m = Matrix::from_ints(&f, &[&[1, 2], &[3, 4], &[5, 6]]);
        let k = m.kron_identity(2);
        assert_eq!(k.shape(), (6, 4));
        assert_eq!(k.get(4, 3), &4);
        assert_eq!(k.get(5, 3), &6);
        assert_eq!(k.get(4, 1), &0);
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, usize, u64)> {
        (0usize..6, 0usize..6, any::<u64>())
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, seed) in arb_matrix()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = gf(101);
            let m = Matrix::random_sparse(&f, r, c, &mut rng);
            prop_assert_eq!(m.rank() + m.kernel().dim(), c);
            let k = m.kernel_basis();
            prop_assert!(m.mul(&k).is_zero());
        }

        #[test]
        fn solve_returns_a_solution((r, c, seed) in arb_matrix()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = gf(101);
            let m = Matrix::random_sparse(&f, r, c, &mut rng);
            let x0: Vec<u64> = (0..c).map(|_| f.random(&mut rng)).collect();
            let b = m.mul_vec(&x0);
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), b);
        }
    }
}
