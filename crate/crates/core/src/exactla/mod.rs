//! Exact dense linear algebra over GF(p) and ℚ.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod subspace;

pub use field::{Field, PrimeField, Rationals};
pub use matrix::{echelonize, kernel, solve_linear, Matrix};
pub use subspace::{subspace_intersect, subspace_preimage, Subspace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("{0} is not an odd prime below 2^31")]
    InvalidModulus(u64),
    #[error("bad scalar {0:?}")]
    BadScalar(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{ToPrimitive, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Integer inputs give the same canonical subspaces over ℚ and GF(p) as long
    // as p divides no pivot denominator; the entries here are tiny, so any
    // disagreement over GF(101) would be a bug.
    #[test]
    fn rational_results_reduce_to_prime_field_results() {
        let q = Rationals;
        let gf = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..5);
            let ints: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-1..=1)).collect()).collect();
            let rows: Vec<&[i64]> = ints.iter().map(|v| v.as_slice()).collect();
            let mq = Matrix::from_ints(&q, &rows);
            let mp = Matrix::from_ints(&gf, &rows);
            let reduce = |s: &Subspace<Rationals>| -> Vec<u64> {
                s.basis()
                    .entries()
                    .iter()
                    .map(|x| {
                        let num = gf.from_i64(x.numer().to_i64().unwrap());
                        let den = gf.from_i64(x.denom().to_i64().unwrap());
                        gf.div(&num, &den).unwrap()
                    })
                    .collect()
            };
            assert_eq!(reduce(&mq.kernel()), mp.kernel().basis().entries().to_vec());
            assert_eq!(reduce(&mq.image()), mp.image().basis().entries().to_vec());
            assert!(!mq.entries().iter().any(|x| !x.is_zero() && x.denom().to_i64() != Some(1)));
        }
    }
}
