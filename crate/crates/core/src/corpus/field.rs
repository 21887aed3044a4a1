//! Arithmetic in `GF(p^m)` as polynomials over `GF(p)` modulo a monic
//! irreducible polynomial. Coefficient vectors are constant-first.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo `b` over `GF(p)`; `b` must be nonzero.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomial of degree `m` whose lower coefficients are the base-`p`
/// digits of `index`, least significant first.
fn monic_from_index(mut index: u64, m: usize, p: u64) -> Vec<u64> {
    let mut c = Vec::with_capacity(m + 1);
    for _ in 0..m {
        c.push(index % p);
        index /= p;
    }
    c.push(1);
    c
}

fn checked_pow(p: u64, m: usize) -> Result<u64> {
    p.checked_pow(m as u32).ok_or(Error::Overflow("field order"))
}

pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let m = modulus.len() - 1;
    for deg in 1..=m / 2 {
        let Ok(count) = checked_pow(p, deg) else {
            return false;
        };
        for idx in 0..count {
            if poly_rem(modulus, &monic_from_index(idx, deg, p), p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `m` over `GF(p)`, scanning
/// candidates by their lower coefficients read as a base-`p` integer with
/// the constant term least significant.
pub fn find_irreducible(p: u64, m: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidParams("extension degree must be at least 1".into()));
    }
    let count = checked_pow(p, m)?;
    (0..count)
        .map(|idx| monic_from_index(idx, m, p))
        .find(|c| is_irreducible(c, p))
        .ok_or_else(|| Error::InvalidParams(format!("no irreducible of degree {m} over GF({p})")))
}

/// `GF(p^m)` together with its defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    modulus: Vec<u64>,
}

/// Field element: `m` coefficients in `0..p`, constant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(Vec<u64>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl FieldSpec {
    /// Validates primality and irreducibility.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParams(
                "modulus must be monic of degree >= 1 with coefficients below p".into(),
            ));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidParams(format!("modulus {modulus:?} is reducible")));
        }
        Ok(FieldSpec { p, modulus })
    }

    pub fn with_degree(p: u64, m: usize) -> Result<Self> {
        let modulus = find_irreducible(p, m)?;
        Ok(FieldSpec { p, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> Result<u64> {
        checked_pow(self.p, self.m())
    }

    pub fn elem(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() != self.m() || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParams(format!(
                "element needs {} coefficients below {}",
                self.m(),
                self.p
            )));
        }
        Ok(FieldElem(coeffs.to_vec()))
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.m()])
    }

    pub fn one(&self) -> FieldElem {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> FieldElem {
        let mut v = vec![0; self.m()];
        v[0] = c % self.p;
        FieldElem(v)
    }

    /// Element with lexicographic rank `r` among coefficient vectors
    /// (the constant coefficient varies slowest).
    pub fn from_rank(&self, mut r: u64) -> FieldElem {
        let m = self.m();
        let mut v = vec![0; m];
        for i in (0..m).rev() {
            v[i] = r % self.p;
            r /= self.p;
        }
        FieldElem(v)
    }

    pub fn rank(&self, a: &FieldElem) -> u64 {
        a.0.iter().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All elements in lexicographic order of coefficient vectors.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElem> + '_> {
        let q = self.order()?;
        Ok((0..q).map(move |r| self.from_rank(r)))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        let m = self.m();
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, p);
        r.resize(m, 0);
        FieldElem(r)
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^(q - 2)`; the multiplicative group has order `q - 1`.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.order()? - 2))
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    /// The constant term when `a` lies in the prime field.
    pub fn as_base(&self, a: &FieldElem) -> Option<u64> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }

    /// `N(x) = x^((p^m - 1) / (p - 1))`, the norm down to `GF(p)`.
    pub fn norm(&self, a: &FieldElem) -> Result<u64> {
        let q = self.order()?;
        let e = (q - 1) / (self.p - 1);
        let v = self.pow(a, e);
        self.as_base(&v)
            .ok_or_else(|| Error::ContractViolation("norm left the base field".into()))
    }
}

impl fmt::Display for FieldSpec {
    /// `p m c0 c1 .. cm`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.p, self.m())?;
        for c in &self.modulus {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(find_irreducible(3, 1), Ok(vec![0, 1]));
        // x^2, x^2+1: x^2 has root 0; x^2+1 has no root in GF(3)
        assert_eq!(find_irreducible(3, 2), Ok(vec![1, 0, 1]));
        // x^3, x^3+1, x^3+x all have roots; x^3+x+1 has none
        assert_eq!(find_irreducible(2, 3), Ok(vec![1, 1, 0, 1]));
        assert_eq!(find_irreducible(4, 2), Err(Error::NotPrime(4)));
        assert!(FieldSpec::new(2, vec![1, 0, 1]).is_err()); // (x+1)^2
        assert!(FieldSpec::new(2, vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn irreducible_has_no_roots_oracle() {
        for p in [2u64, 3, 5, 7] {
            for m in 2..=3 {
                let f = find_irreducible(p, m).unwrap();
                for x in 0..p {
                    let val = f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
                    assert_ne!(val, 0, "p={p} m={m} root {x}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m) in [(2, 3), (3, 2), (5, 2), (7, 3), (13, 1)] {
            let f = FieldSpec::with_degree(p, m).unwrap();
            let q = f.order().unwrap();
            for _ in 0..50 {
                let a = f.from_rank(rng.gen_range(0..q));
                let b = f.from_rank(rng.gen_range(0..q));
                let c = f.from_rank(rng.gen_range(0..q));
                assert_eq!(f.mul(&f.one(), &a), a);
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert!(f.is_zero(&f.sub(&a, &a)));
                if !f.is_zero(&a) {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
                }
            }
        }
        let f = FieldSpec::with_degree(3, 2).unwrap();
        assert_eq!(f.inv(&f.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn fermat_by_repeated_multiplication() {
        for (p, m) in [(2, 3), (3, 2), (5, 2)] {
            let f = FieldSpec::with_degree(p, m).unwrap();
            let q = f.order().unwrap();
            for a in f.elements().unwrap().filter(|a| !f.is_zero(a)) {
                let mut acc = f.one();
                for _ in 0..q - 1 {
                    acc = f.mul(&acc, &a);
                }
                assert_eq!(acc, f.one());
                assert_eq!(f.pow(&a, q - 1), f.one());
            }
        }
    }

    #[test]
    fn norm_examples() {
        let f = FieldSpec::with_degree(3, 2).unwrap();
        assert_eq!(f.norm(&f.zero()), Ok(0));
        assert_eq!(f.norm(&f.one()), Ok(1));
        // x^4 over GF(9) lands in GF(3) for all nine elements
        for a in f.elements().unwrap() {
            let x4 = f.pow(&a, 4);
            assert!(f.as_base(&x4).is_some());
        }
    }

    #[test]
    fn norm_multiplicative_exhaustive() {
        for (p, m) in [(2, 2), (3, 2), (5, 2), (3, 1), (5, 1), (2, 3)] {
            let f = FieldSpec::with_degree(p, m).unwrap();
            let elems: Vec<_> = f.elements().unwrap().collect();
            for a in &elems {
                for b in &elems {
                    let lhs = f.norm(&f.mul(a, b)).unwrap();
                    let rhs = f.norm(a).unwrap() * f.norm(b).unwrap() % p;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn display_and_rank() {
        let f = FieldSpec::with_degree(3, 2).unwrap();
        assert_eq!(f.to_string(), "3 2 1 0 1");
        for r in 0..9 {
            assert_eq!(f.rank(&f.from_rank(r)), r);
        }
        assert_eq!(f.from_rank(1).coeffs(), &[0, 1]);
        assert_eq!(f.from_rank(3).coeffs(), &[1, 0]);
    }
}
