//! Minimal commutative ring interface shared by the coefficient rings.

use std::fmt::Debug;

use rand::Rng;

use crate::gf::{Fe, Gf};

pub trait Ring {
    type E: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::E) -> bool {
        *a == self.zero()
    }

    fn from_int(&self, n: i64) -> Self::E {
        let mut acc = self.zero();
        let mut base = self.one();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        if n < 0 {
            self.neg(&acc)
        } else {
            acc
        }
    }

    fn pow(&self, a: &Self::E, mut e: u64) -> Self::E {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }
}

/// Rings containing a fixed copy of F_q.
pub trait FqAlgebra: Ring {
    fn field(&self) -> &Gf;
    fn scalar(&self, a: Fe) -> Self::E;
}

impl Ring for Gf {
    type E = Fe;
    fn zero(&self) -> Fe {
        0
    }
    fn one(&self) -> Fe {
        1
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        Gf::add(self, *a, *b)
    }
    fn neg(&self, a: &Fe) -> Fe {
        Gf::neg(self, *a)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        Gf::mul(self, *a, *b)
    }
    fn from_int(&self, n: i64) -> Fe {
        Gf::from_int(self, n)
    }
    fn pow(&self, a: &Fe, e: u64) -> Fe {
        Gf::pow(self, *a, e)
    }
}

impl FqAlgebra for Gf {
    fn field(&self) -> &Gf {
        self
    }
    fn scalar(&self, a: Fe) -> Fe {
        a
    }
}

/// Dual numbers F_q[ε]/(ε²); an element is (a, b) = a + bε.
#[derive(Debug, Clone)]
pub struct Dual {
    pub gf: Gf,
}

impl Ring for Dual {
    type E = (Fe, Fe);
    fn zero(&self) -> (Fe, Fe) {
        (0, 0)
    }
    fn one(&self) -> (Fe, Fe) {
        (1, 0)
    }
    fn add(&self, a: &(Fe, Fe), b: &(Fe, Fe)) -> (Fe, Fe) {
        (self.gf.add(a.0, b.0), self.gf.add(a.1, b.1))
    }
    fn neg(&self, a: &(Fe, Fe)) -> (Fe, Fe) {
        (self.gf.neg(a.0), self.gf.neg(a.1))
    }
    fn mul(&self, a: &(Fe, Fe), b: &(Fe, Fe)) -> (Fe, Fe) {
        let g = &self.gf;
        (g.mul(a.0, b.0), g.add(g.mul(a.0, b.1), g.mul(a.1, b.0)))
    }
    fn from_int(&self, n: i64) -> (Fe, Fe) {
        (self.gf.from_int(n), 0)
    }
}

impl FqAlgebra for Dual {
    fn field(&self) -> &Gf {
        &self.gf
    }
    fn scalar(&self, a: Fe) -> (Fe, Fe) {
        (a, 0)
    }
}

/// Polynomials F_q[t], coefficient vectors without trailing zeros.
#[derive(Debug, Clone)]
pub struct PolyRing {
    pub gf: Gf,
}

impl PolyRing {
    fn trim(mut v: Vec<Fe>) -> Vec<Fe> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// The variable t.
    pub fn t(&self) -> Vec<Fe> {
        vec![0, 1]
    }

    pub fn eval(&self, a: &[Fe], t: Fe) -> Fe {
        a.iter().rev().fold(0, |acc, &c| self.gf.add(self.gf.mul(acc, t), c))
    }

    pub fn degree(&self, a: &[Fe]) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }
}

impl Ring for PolyRing {
    type E = Vec<Fe>;
    fn zero(&self) -> Vec<Fe> {
        Vec::new()
    }
    fn one(&self) -> Vec<Fe> {
        vec![1]
    }
    fn add(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.gf.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        Self::trim(v)
    }
    fn neg(&self, a: &Vec<Fe>) -> Vec<Fe> {
        a.iter().map(|&c| self.gf.neg(c)).collect()
    }
    fn mul(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = self.gf.add(v[i + j], self.gf.mul(x, y));
            }
        }
        Self::trim(v)
    }
    fn from_int(&self, n: i64) -> Vec<Fe> {
        Self::trim(vec![self.gf.from_int(n)])
    }
}

impl FqAlgebra for PolyRing {
    fn field(&self) -> &Gf {
        &self.gf
    }
    fn scalar(&self, a: Fe) -> Vec<Fe> {
        Self::trim(vec![a])
    }
}

/// Checks the commutative ring axioms on random triples.
pub fn spot_check_ring<R: Ring, G: Rng + ?Sized>(
    ring: &R,
    rng: &mut G,
    sample: impl Fn(&mut G) -> R::E,
    trials: usize,
) -> bool {
    (0..trials).all(|_| {
        let (a, b, c) = (sample(rng), sample(rng), sample(rng));
        ring.add(&ring.add(&a, &b), &c) == ring.add(&a, &ring.add(&b, &c))
            && ring.add(&a, &b) == ring.add(&b, &a)
            && ring.mul(&ring.mul(&a, &b), &c) == ring.mul(&a, &ring.mul(&b, &c))
            && ring.mul(&a, &b) == ring.mul(&b, &a)
            && ring.mul(&a, &ring.add(&b, &c)) == ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
            && ring.add(&a, &ring.neg(&a)) == ring.zero()
            && ring.mul(&a, &ring.one()) == a
    })
}
