//! Dense univariate polynomials over a [`Field`], coefficients lowest degree first.
//! The zero polynomial is the empty vector.

use super::field::Field;
use super::matrix::Matrix;

pub fn trim<F: Field>(f: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn eval<F: Field>(f: &F, p: &[F::Elem], x: &F::Elem) -> F::Elem {
    p.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let nb: Vec<_> = b.iter().map(|c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder. Panics on division by the zero polynomial.
pub fn div_rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let b = trim(f, b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = trim(f, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = f.inv(b.last().unwrap()).unwrap();
    let mut q = vec![f.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = f.mul(r.last().unwrap(), &lead_inv);
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, bc));
        }
        q[shift] = c;
        r.pop();
        r = trim(f, r);
    }
    (trim(f, q), r)
}

/// Monic gcd.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(f, &a, &b);
        a = b;
        b = r;
    }
    make_monic(f, a)
}

pub fn make_monic<F: Field>(f: &F, p: Vec<F::Elem>) -> Vec<F::Elem> {
    match p.last() {
        None => p,
        Some(lead) => {
            let inv = f.inv(lead).unwrap();
            p.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn pow_mod<F: Field>(f: &F, base: &[F::Elem], mut exp: u64, modulus: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = div_rem(f, &[f.one()], modulus).1;
    let mut b = div_rem(f, base, modulus).1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = div_rem(f, &mul(f, &acc, &b), modulus).1;
        }
        b = div_rem(f, &mul(f, &b, &b), modulus).1;
        exp >>= 1;
    }
    acc
}

/// Characteristic polynomial det(xI - M) of a square matrix, via reduction to
/// upper Hessenberg form followed by the standard three-term recurrence.
pub fn charpoly<F: Field>(m: &Matrix<F>) -> Vec<F::Elem> {
    assert_eq!(m.rows(), m.cols(), "charpoly of a non-square matrix");
    let f = m.field().clone();
    let n = m.rows();
    let mut h: Vec<Vec<F::Elem>> = (0..n).map(|i| m.row(i).to_vec()).collect();

    for col in 0..n.saturating_sub(2) {
        let m1 = col + 1;
        let Some(piv) = (m1..n).find(|&i| !f.is_zero(&h[i][col])) else {
            continue;
        };
        if piv != m1 {
            h.swap(piv, m1);
            for row in h.iter_mut() {
                row.swap(piv, m1);
            }
        }
        let t_inv = f.inv(&h[m1][col]).unwrap();
        for i in (m1 + 1)..n {
            let u = f.mul(&h[i][col], &t_inv);
            if f.is_zero(&u) {
                continue;
            }
            for j in 0..n {
                let v = f.mul(&u, &h[m1][j]);
                h[i][j] = f.sub(&h[i][j], &v);
            }
            for row in h.iter_mut() {
                let v = f.mul(&u, &row[i]);
                row[m1] = f.add(&row[m1], &v);
            }
        }
    }

    // p[k] = charpoly of the leading k x k block.
    let mut p: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
    for k in 0..n {
        let lin = vec![f.neg(&h[k][k]), f.one()];
        let mut next = mul(&f, &lin, &p[k]);
        let mut t = f.one();
        for i in 1..=k {
            t = f.mul(&t, &h[k - i + 1][k - i]);
            let coef = f.mul(&t, &h[k - i][k]);
            let term: Vec<_> = p[k - i].iter().map(|c| f.mul(c, &coef)).collect();
            next = sub(&f, &next, &term);
        }
        p.push(next);
    }
    p.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Independent route: det(tI - M) by elimination at sample points.
    fn det<F: Field>(m: &Matrix<F>) -> F::Elem {
        let f = m.field().clone();
        let n = m.rows();
        let mut a: Vec<Vec<F::Elem>> = (0..n).map(|i| m.row(i).to_vec()).collect();
        let mut d = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !f.is_zero(&a[r][c])) else {
                return f.zero();
            };
            if p != c {
                a.swap(p, c);
                d = f.neg(&d);
            }
            d = f.mul(&d, &a[c][c]);
            let inv = f.inv(&a[c][c]).unwrap();
            for r in (c + 1)..n {
                let factor = f.mul(&a[r][c], &inv);
                for k in c..n {
                    let v = f.mul(&factor, &a[c][k]);
                    a[r][k] = f.sub(&a[r][k], &v);
                }
            }
        }
        d
    }

    fn check_charpoly<F: Field>(f: &F, m: &Matrix<F>) {
        let cp = charpoly(m);
        assert_eq!(cp.len(), m.rows() + 1);
        for t in -4..=4 {
            let t = f.from_i64(t);
            let shifted = Matrix::identity(f, m.rows()).scale(&t).sub(m);
            assert_eq!(eval(f, &cp, &t), det(&shifted));
        }
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gf = PrimeField::new(101).unwrap();
        for n in 0..7 {
            for _ in 0..10 {
                let m = Matrix::random(&gf, n, n, &mut rng);
                check_charpoly(&gf, &m);
                let sparse = Matrix::random_sparse(&gf, n, n, &mut rng);
                check_charpoly(&gf, &sparse);
            }
        }
        let q = Rationals;
        for n in 0..5 {
            let m = Matrix::random(&q, n, n, &mut rng);
            check_charpoly(&q, &m);
        }
    }

    #[test]
    fn division_identity() {
        let f = PrimeField::new(13).unwrap();
        let a = vec![3, 4, 0, 7, 1];
        let b = vec![2, 0, 5];
        let (q, r) = div_rem(&f, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), trim(&f, a.clone()));
        assert_eq!(gcd(&f, &mul(&f, &a, &b), &b), make_monic(&f, b));
    }
}
