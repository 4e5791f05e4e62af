//! Scalar fields: prime fields GF(p) with a runtime modulus, and the rationals.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};

use super::poly;
use super::LinAlgError;

/// Exact field arithmetic over a runtime-described field.
///
/// Elements are plain values; all operations go through the field so that a
/// prime modulus chosen at runtime is never baked into the element type.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    /// Uniform over GF(p); small integers over the rationals.
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Parses `"n"`, `"-n"` or `"n/d"`.
    fn parse(&self, text: &str) -> Result<Self::Elem, LinAlgError>;
    fn format(&self, a: &Self::Elem) -> String;

    /// Some root in the field of the polynomial with the given coefficients
    /// (lowest degree first), if one can be found.
    fn find_root(&self, coeffs: &[Self::Elem], rng: &mut dyn RngCore) -> Option<Self::Elem>;

    fn describe(&self) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// GF(p) for a prime 2 < p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinAlgError> {
        if p <= 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(LinAlgError::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a % self.p == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn parse(&self, text: &str) -> Result<u64, LinAlgError> {
        let q = parse_rational(text)?;
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
            .ok_or_else(|| LinAlgError::BadScalar(format!("{text}: denominator vanishes mod {}", self.p)))
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn find_root(&self, coeffs: &[u64], rng: &mut dyn RngCore) -> Option<u64> {
        let f = poly::trim(self, coeffs.to_vec());
        if f.len() <= 1 {
            return None;
        }
        if self.is_zero(&f[0]) {
            return Some(0);
        }
        // gcd(f, x^p - x) collects the distinct linear factors of f.
        let x = vec![0, 1];
        let xp = poly::pow_mod(self, &x, self.p, &f);
        let mut g = poly::gcd(self, &f, &poly::sub(self, &xp, &x));
        if g.len() <= 1 {
            return None;
        }
        if self.p <= 4096 {
            return (0..self.p).find(|t| self.is_zero(&poly::eval(self, &g, t)));
        }
        // Equal-degree splitting.
        while g.len() > 2 {
            let a = self.random(rng);
            let shifted = vec![a, 1];
            let h = poly::pow_mod(self, &shifted, (self.p - 1) / 2, &g);
            let d = poly::gcd(self, &g, &poly::sub(self, &h, &[1]));
            if d.len() > 1 && d.len() < g.len() {
                let (q, _) = poly::div_rem(self, &g, &d);
                g = if d.len() <= q.len() { d } else { q };
            }
        }
        self.div(&self.neg(&g[0]), &g[1])
    }

    fn describe(&self) -> String {
        format!("GF({})", self.p)
    }
}

impl PrimeField {
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u64().expect("reduced residue fits in u64")
    }
}

/// The field of rational numbers with arbitrary-precision, always-reduced fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

fn parse_rational(text: &str) -> Result<BigRational, LinAlgError> {
    let bad = || LinAlgError::BadScalar(text.to_string());
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.gen_range(-3..=3))
    }
    fn parse(&self, text: &str) -> Result<BigRational, LinAlgError> {
        parse_rational(text)
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    // Rational root test on the primitive integer polynomial.
    fn find_root(&self, coeffs: &[BigRational], _rng: &mut dyn RngCore) -> Option<BigRational> {
        let f = poly::trim(self, coeffs.to_vec());
        if f.len() <= 1 {
            return None;
        }
        if f[0].is_zero() {
            return Some(self.zero());
        }
        let lcm = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = f.iter().map(|c| (c * &lcm).to_integer()).collect();
        let lead = ints.last().cloned()?;
        for p in divisors(&ints[0])? {
            for q in divisors(&lead)? {
                for sign in [1, -1] {
                    let cand = BigRational::new(&p * sign, q.clone());
                    if poly::eval(self, &f, &cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }

    fn describe(&self) -> String {
        "Q".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modulus_must_be_an_odd_prime_below_2_31() {
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok());
        for bad in [0, 1, 2, 4, 91, 1 << 31] {
            assert!(PrimeField::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn prime_field_axioms_hold_exhaustively_for_gf7() {
        let f = PrimeField::new(7).unwrap();
        for a in 0..7u64 {
            if a != 0 {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
            for b in 0..7u64 {
                assert_eq!(f.add(&f.sub(&a, &b), &b), a);
                for c in 0..7u64 {
                    let lhs = f.mul(&a, &f.add(&b, &c));
                    let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn parses_fractions() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), 3);
        assert_eq!(f.parse("-1").unwrap(), 4);
        assert!(f.parse("1/5").is_err());
        let q = Rationals;
        assert_eq!(q.format(&q.parse("2/4").unwrap()), "1/2");
        assert!(q.parse("x").is_err());
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn finds_roots_over_small_and_large_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for p in [101u64, 1_000_003] {
            let f = PrimeField::new(p).unwrap();
            // (x - 7)(x^2 + 1) style polynomials with a planted root.
            let root = f.from_i64(7);
            let quad = vec![1, 0, 1];
            let lin = vec![f.neg(&root), 1];
            let prod = poly::mul(&f, &quad, &lin);
            let r = f.find_root(&prod, &mut rng).unwrap();
            assert!(f.is_zero(&poly::eval(&f, &prod, &r)));
        }
        let f = PrimeField::new(103).unwrap(); // -1 is a non-residue mod 103
        assert_eq!(f.find_root(&[1, 0, 1], &mut rng), None);
    }

    #[test]
    fn rational_roots() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // 2x^2 - 3x + 1 = (2x - 1)(x - 1)
        let f = vec![q.from_i64(1), q.from_i64(-3), q.from_i64(2)];
        let r = q.find_root(&f, &mut rng).unwrap();
        assert!(poly::eval(&q, &f, &r).is_zero());
        assert_eq!(q.find_root(&[q.from_i64(-2), q.zero(), q.one()], &mut rng), None);
    }
}
