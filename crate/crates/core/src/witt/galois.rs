//! W_s(F_{p^m}) as the Galois ring (Z/p^s)[x]/(f), f the lifted field modulus.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Fe, Gf};
use crate::ring::Ring;

pub const MAX_DEGREE: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrElem {
    pub c: [u32; MAX_DEGREE],
}

impl fmt::Debug for GrElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

impl GrElem {
    pub const ZERO: GrElem = GrElem { c: [0; MAX_DEGREE] };
}

struct Inner {
    gf: Gf,
    s: u32,
    p: u64,
    pk: Vec<u64>,
    f: Vec<u64>,
    teich: Vec<GrElem>,
}

#[derive(Clone)]
pub struct GaloisRing(Arc<Inner>);

impl fmt::Debug for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR({}^{}, {})", self.0.p, self.0.s, self.0.gf.m())
    }
}

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.s == other.0.s && self.0.gf == other.0.gf
    }
}

impl GaloisRing {
    pub fn new(gf: &Gf, s: u32) -> Result<GaloisRing> {
        if s == 0 {
            return Err(Error::TruncationTooShort("s must be at least 1".into()));
        }
        let p = gf.p() as u64;
        let pk: Vec<u64> = (0..=s).map(|k| p.pow(k)).collect();
        if pk[s as usize] > u32::MAX as u64 {
            return Err(Error::UnsupportedField(format!("p^s = {}^{} too large", p, s)));
        }
        let f = gf.modulus().iter().map(|&c| c as u64).collect();
        let mut gr = GaloisRing(Arc::new(Inner { gf: gf.clone(), s, p, pk, f, teich: Vec::new() }));
        let q = gf.q() as u64;
        let teich = gf
            .elements()
            .map(|t| {
                let mut g = gr.lift(t);
                for _ in 0..s {
                    g = gr.pow(&g, q);
                }
                g
            })
            .collect();
        Arc::get_mut(&mut gr.0).unwrap().teich = teich;
        Ok(gr)
    }

    pub fn field(&self) -> &Gf {
        &self.0.gf
    }
    pub fn s(&self) -> u32 {
        self.0.s
    }
    pub fn p(&self) -> u64 {
        self.0.p
    }
    fn m(&self) -> usize {
        self.0.gf.m() as usize
    }
    fn modulus(&self) -> u64 {
        self.0.pk[self.0.s as usize]
    }

    /// Coefficientwise lift of a field element (not multiplicative).
    pub fn lift(&self, t: Fe) -> GrElem {
        let mut g = GrElem::ZERO;
        for (i, c) in self.0.gf.coeffs(t).into_iter().enumerate() {
            g.c[i] = c;
        }
        g
    }

    pub fn teichmuller(&self, t: Fe) -> GrElem {
        self.0.teich[t as usize]
    }

    pub fn residue(&self, g: &GrElem) -> Fe {
        let p = self.0.p as u32;
        let v: Vec<u32> = g.c[..self.m()].iter().map(|&c| c % p).collect();
        self.0.gf.from_coeffs(&v)
    }

    pub fn is_unit(&self, g: &GrElem) -> bool {
        self.residue(g) != 0
    }

    /// p-adic valuation, with s for zero.
    pub fn valuation(&self, g: &GrElem) -> u32 {
        let s = self.0.s;
        g.c[..self.m()]
            .iter()
            .map(|&c| if c == 0 { s } else { (0..s).find(|&k| c as u64 % self.0.pk[k as usize + 1] != 0).unwrap() })
            .min()
            .unwrap_or(s)
    }

    pub fn p_pow(&self, k: u32) -> GrElem {
        let mut g = GrElem::ZERO;
        if k < self.0.s {
            g.c[0] = self.0.pk[k as usize] as u32;
        }
        g
    }

    pub fn mul_p_pow(&self, g: &GrElem, k: u32) -> GrElem {
        if k >= self.0.s {
            return GrElem::ZERO;
        }
        let mut out = *g;
        let md = self.modulus();
        for c in out.c[..self.m()].iter_mut() {
            *c = ((*c as u64 * self.0.pk[k as usize]) % md) as u32;
        }
        out
    }

    /// g / p^k for g of valuation at least k; the quotient is only
    /// determined modulo p^{s-k} and the representative with top digits
    /// zero is returned.
    pub fn div_p_pow(&self, g: &GrElem, k: u32) -> GrElem {
        debug_assert!(self.valuation(g) >= k);
        let mut out = *g;
        for c in out.c[..self.m()].iter_mut() {
            *c = (*c as u64 / self.0.pk[k as usize]) as u32;
        }
        out
    }

    pub fn scalar_mul(&self, n: i64, g: &GrElem) -> GrElem {
        self.mul(&self.from_int(n), g)
    }

    /// Inverse of a unit by Newton iteration from the residue inverse.
    pub fn inv(&self, g: &GrElem) -> Result<GrElem> {
        let r = self.residue(g);
        if r == 0 {
            return Err(Error::NotAUnit);
        }
        let mut x = self.teichmuller(self.0.gf.inv(r));
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.0.s {
            x = self.mul(&x, &self.sub(&two, &self.mul(g, &x)));
            prec *= 2;
        }
        debug_assert_eq!(self.mul(&x, g), self.one());
        Ok(x)
    }

    /// Standard Witt components of g.
    pub fn to_digits(&self, g: &GrElem) -> Vec<Fe> {
        let mut cur = *g;
        let mut out = Vec::with_capacity(self.0.s as usize);
        for i in 0..self.0.s {
            let b = self.residue(&cur);
            out.push(self.0.gf.frob(b, i as i64));
            cur = self.sub(&cur, &self.teichmuller(b));
            cur = self.div_p_pow(&cur, 1);
        }
        out
    }

    /// Σ p^i ξ(a_i^{p^{-i}}).
    pub fn from_digits(&self, digits: &[Fe]) -> GrElem {
        assert_eq!(digits.len(), self.0.s as usize, "digit count must equal s");
        let mut acc = GrElem::ZERO;
        for (i, &a) in digits.iter().enumerate().rev() {
            acc = self.mul_p_pow(&acc, 1);
            acc = self.add(&acc, &self.teichmuller(self.0.gf.frob(a, -(i as i64))));
        }
        acc
    }

    /// Canonical representative of g mod p^d: digits from d on cleared.
    pub fn truncate(&self, g: &GrElem, d: u32) -> GrElem {
        if d >= self.0.s {
            return *g;
        }
        let mut digits = self.to_digits(g);
        for x in digits.iter_mut().skip(d as usize) {
            *x = 0;
        }
        self.from_digits(&digits)
    }

    /// Image under the reduction W_s -> W_t for t <= s.
    pub fn reduce_to(&self, g: &GrElem, target: &GaloisRing) -> GrElem {
        let md = target.modulus();
        let mut out = *g;
        for c in out.c.iter_mut() {
            *c = (*c as u64 % md) as u32;
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GrElem {
        let mut g = GrElem::ZERO;
        let md = self.modulus();
        for c in g.c[..self.m()].iter_mut() {
            *c = rng.gen_range(0..md) as u32;
        }
        g
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> GrElem {
        loop {
            let g = self.random(rng);
            if self.is_unit(&g) {
                return g;
            }
        }
    }

    /// All elements, in digit order.
    pub fn elements(&self) -> Vec<GrElem> {
        let q = self.0.gf.q() as u64;
        let s = self.0.s as usize;
        (0..q.pow(s as u32))
            .map(|mut code| {
                let digits: Vec<Fe> = (0..s)
                    .map(|_| {
                        let d = (code % q) as Fe;
                        code /= q;
                        d
                    })
                    .collect();
                self.from_digits(&digits)
            })
            .collect()
    }
}

impl Ring for GaloisRing {
    type E = GrElem;

    fn zero(&self) -> GrElem {
        GrElem::ZERO
    }
    fn one(&self) -> GrElem {
        let mut g = GrElem::ZERO;
        g.c[0] = 1 % self.modulus() as u32;
        g
    }
    fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        let md = self.modulus() as u32;
        let mut out = GrElem::ZERO;
        for i in 0..self.m() {
            let v = a.c[i] + b.c[i];
            out.c[i] = if v >= md { v - md } else { v };
        }
        out
    }
    fn neg(&self, a: &GrElem) -> GrElem {
        let md = self.modulus() as u32;
        let mut out = GrElem::ZERO;
        for i in 0..self.m() {
            out.c[i] = if a.c[i] == 0 { 0 } else { md - a.c[i] };
        }
        out
    }
    fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        let m = self.m();
        let md = self.modulus();
        if m == 1 {
            let mut out = GrElem::ZERO;
            out.c[0] = (a.c[0] as u64 * b.c[0] as u64 % md) as u32;
            return out;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + a.c[i] as u64 * b.c[j] as u64) % md;
            }
        }
        let f = &self.0.f;
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                prod[d - m + i] = (prod[d - m + i] + (md - c) * f[i]) % md;
            }
        }
        let mut out = GrElem::ZERO;
        for i in 0..m {
            out.c[i] = prod[i] as u32;
        }
        out
    }
    fn from_int(&self, n: i64) -> GrElem {
        let mut g = GrElem::ZERO;
        g.c[0] = n.rem_euclid(self.modulus() as i64) as u32;
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn teichmuller_is_fixed_and_multiplicative() {
        for (p, m, s) in [(2, 2, 3), (3, 1, 3), (5, 2, 2), (2, 1, 5), (3, 2, 3)] {
            let gf = Gf::new(p, m).unwrap();
            let gr = GaloisRing::new(&gf, s).unwrap();
            for a in gf.elements() {
                let t = gr.teichmuller(a);
                assert_eq!(gr.pow(&t, gf.q() as u64), t);
                assert_eq!(gr.residue(&t), a);
                for b in gf.elements() {
                    assert_eq!(gr.mul(&t, &gr.teichmuller(b)), gr.teichmuller(gf.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn digits_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, m, s) in [(2, 2, 3), (3, 1, 2), (5, 2, 2), (2, 3, 4), (13, 1, 3)] {
            let gf = Gf::new(p, m).unwrap();
            let gr = GaloisRing::new(&gf, s).unwrap();
            for _ in 0..1000 {
                let g = gr.random(&mut rng);
                assert_eq!(gr.from_digits(&gr.to_digits(&g)), g);
                let d: Vec<Fe> = (0..s).map(|_| gf.random(&mut rng)).collect();
                assert_eq!(gr.to_digits(&gr.from_digits(&d)), d);
            }
        }
        let gr = GaloisRing::new(&Gf::new(2, 1).unwrap(), 3).unwrap();
        assert_eq!(gr.to_digits(&gr.from_int(2)), vec![0, 1, 0]);
    }

    #[test]
    fn valuation_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let gf = Gf::new(3, 2).unwrap();
        let gr = GaloisRing::new(&gf, 3).unwrap();
        for _ in 0..1000 {
            let a = gr.random(&mut rng);
            let b = gr.random(&mut rng);
            let va = gr.valuation(&a);
            assert_eq!(gr.valuation(&gr.mul(&a, &b)), (va + gr.valuation(&b)).min(3));
            let digits = gr.to_digits(&a);
            assert_eq!(va as usize, digits.iter().position(|&d| d != 0).unwrap_or(3));
            if gr.is_unit(&a) {
                assert_eq!(gr.mul(&a, &gr.inv(&a).unwrap()), gr.one());
            } else {
                assert_eq!(gr.inv(&a), Err(Error::NotAUnit));
            }
        }
    }
}
