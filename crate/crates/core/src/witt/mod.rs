//! Truncated Witt vectors.
//!
//! Digits are the standard Witt components a_0..a_{s-1}; the element they
//! denote is Σ p^i ξ(a_i^{p^{-i}}) with ξ the Teichmüller lift.

mod galois;
pub mod structure;

use std::sync::Arc;

use rand::Rng;

pub use galois::{GaloisRing, GrElem};
pub use structure::{generate_structure_polynomials, StructurePolynomialTable};

use crate::error::{Error, Result};
use crate::gf::{Fe, Gf};
use crate::ring::{FqAlgebra, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittVector {
    pub digits: Vec<Fe>,
}

impl WittVector {
    pub fn new(digits: Vec<Fe>) -> Self {
        WittVector { digits }
    }
    pub fn zero(s: usize) -> Self {
        WittVector { digits: vec![0; s] }
    }
    pub fn s(&self) -> usize {
        self.digits.len()
    }
    /// Index of the first nonzero digit, s for zero.
    pub fn valuation(&self) -> usize {
        self.digits.iter().position(|&d| d != 0).unwrap_or(self.digits.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittOp {
    Add,
    Mul,
    Neg,
}

/// W_s(F_q) with Galois-ring arithmetic underneath.
#[derive(Debug, Clone, PartialEq)]
pub struct WittRing {
    gr: GaloisRing,
}

impl WittRing {
    pub fn new(gf: &Gf, s: usize) -> Result<WittRing> {
        Ok(WittRing { gr: GaloisRing::new(gf, s as u32)? })
    }

    pub fn galois(&self) -> &GaloisRing {
        &self.gr
    }
    pub fn field(&self) -> &Gf {
        self.gr.field()
    }
    pub fn s(&self) -> usize {
        self.gr.s() as usize
    }

    fn check(&self, a: &WittVector) -> Result<()> {
        if a.s() != self.s() {
            return Err(Error::ParamsMismatch);
        }
        a.digits.iter().try_for_each(|&d| self.field().check(d).map(|_| ()))
    }

    pub fn from_digits(&self, a: &WittVector) -> Result<GrElem> {
        self.check(a)?;
        Ok(self.gr.from_digits(&a.digits))
    }

    pub fn teichmuller_digits(&self, g: &GrElem) -> WittVector {
        WittVector::new(self.gr.to_digits(g))
    }

    pub fn op(&self, a: &WittVector, b: &WittVector, op: WittOp) -> Result<WittVector> {
        let x = self.from_digits(a)?;
        let y = self.from_digits(b)?;
        let g = match op {
            WittOp::Add => self.gr.add(&x, &y),
            WittOp::Mul => self.gr.mul(&x, &y),
            WittOp::Neg => self.gr.neg(&x),
        };
        Ok(self.teichmuller_digits(&g))
    }

    pub fn add(&self, a: &WittVector, b: &WittVector) -> Result<WittVector> {
        self.op(a, b, WittOp::Add)
    }
    pub fn mul(&self, a: &WittVector, b: &WittVector) -> Result<WittVector> {
        self.op(a, b, WittOp::Mul)
    }
    pub fn neg(&self, a: &WittVector) -> Result<WittVector> {
        self.op(a, a, WittOp::Neg)
    }

    pub fn valuation(&self, a: &WittVector) -> usize {
        a.valuation()
    }

    pub fn invert_unit(&self, a: &WittVector) -> Result<WittVector> {
        let g = self.from_digits(a)?;
        Ok(self.teichmuller_digits(&self.gr.inv(&g)?))
    }

    /// ln(u) = Σ_{j>=1} (-1)^{j-1} (u-1)^j / j for u ≡ 1 mod p.
    pub fn log(&self, u: &WittVector) -> Result<WittVector> {
        let g = self.from_digits(u)?;
        Ok(self.teichmuller_digits(&galois_log(&self.gr, &g)?))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> WittVector {
        WittVector::new((0..self.s()).map(|_| self.field().random(rng)).collect())
    }
}

/// Logarithm of a principal unit in the Galois ring.
pub fn galois_log(gr: &GaloisRing, u: &GrElem) -> Result<GrElem> {
    let s = gr.s();
    let p = gr.p();
    let x = gr.sub(u, &gr.one());
    let v = gr.valuation(&x);
    if v == 0 {
        return Err(Error::DomainError("log needs u ≡ 1 mod p".into()));
    }
    if v >= s {
        return Ok(gr.zero());
    }
    // x = p^v y; the j-th term is p^{jv - e} y^j / j' with j = p^e j'
    let y = gr.div_p_pow(&x, v);
    let mut acc = gr.zero();
    let mut yj = gr.one();
    // beyond this bound j*v - v_p(j) >= s for every j
    let last = (s as u64 + 2) * p;
    for j in 1..=last {
        yj = gr.mul(&yj, &y);
        let mut e = 0u32;
        let mut jp = j;
        while jp % p == 0 {
            jp /= p;
            e += 1;
        }
        let shift = j as i64 * v as i64 - e as i64;
        if shift < v as i64 {
            return Err(Error::PrecisionError(format!("term {j} loses p-adic precision")));
        }
        if shift >= s as i64 {
            continue;
        }
        let inv = gr.inv(&gr.from_int(jp as i64))?;
        let mut term = gr.mul_p_pow(&gr.mul(&yj, &inv), shift as u32);
        if j % 2 == 0 {
            term = gr.neg(&term);
        }
        acc = gr.add(&acc, &term);
    }
    Ok(acc)
}

/// W_s(R) for a coefficient ring R of characteristic p, via Φ and Ψ.
#[derive(Debug, Clone)]
pub struct WittGeneric<R: Ring> {
    pub base: R,
    pub p: u32,
    pub s: usize,
    table: Arc<StructurePolynomialTable>,
}

impl<R: Ring> WittGeneric<R> {
    pub fn new(base: R, p: u32, s: usize) -> Result<Self> {
        let table = generate_structure_polynomials(p, s)?;
        Ok(WittGeneric { base, p, s, table })
    }

    /// As [`WittGeneric::new`] after spot-checking the ring axioms of `base`.
    pub fn checked<G: Rng + ?Sized>(
        base: R,
        p: u32,
        s: usize,
        rng: &mut G,
        sample: impl Fn(&mut G) -> R::E,
    ) -> Result<Self> {
        if !crate::ring::spot_check_ring(&base, rng, sample, 100) {
            return Err(Error::DomainError("coefficient ring fails the ring axioms".into()));
        }
        if !base.is_zero(&base.from_int(p as i64)) {
            return Err(Error::DomainError(format!("coefficient ring is not of characteristic {p}")));
        }
        Self::new(base, p, s)
    }

    pub fn table(&self) -> &StructurePolynomialTable {
        &self.table
    }

    /// The element with digit `value` at position `pos`, i.e. ξ(value)^{p^{-pos}} p^pos.
    pub fn monomial(&self, pos: usize, value: R::E) -> Vec<R::E> {
        let mut v = vec![self.base.zero(); self.s];
        if pos < self.s {
            v[pos] = value;
        }
        v
    }
}

impl<R: FqAlgebra> WittGeneric<R> {
    /// Image of a vector in W_s(F_q) under the inclusion F_q -> R.
    pub fn embed(&self, a: &WittVector) -> Vec<R::E> {
        a.digits.iter().map(|&d| self.base.scalar(d)).collect()
    }
}

impl<R: Ring> Ring for WittGeneric<R> {
    type E = Vec<R::E>;

    fn zero(&self) -> Self::E {
        vec![self.base.zero(); self.s]
    }
    fn one(&self) -> Self::E {
        let mut v = self.zero();
        v[0] = self.base.one();
        v
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.table.add_polys.iter().map(|f| f.eval(&self.base, a, b)).collect()
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.table.mul_polys.iter().map(|f| f.eval(&self.base, a, b)).collect()
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        if self.p == 2 {
            // -1 = (1, 1, .., 1) over any F_2-algebra
            let minus_one = vec![self.base.one(); self.s];
            self.mul(&minus_one, a)
        } else {
            a.iter().map(|x| self.base.neg(x)).collect()
        }
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Dual, PolyRing};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(d: &[Fe]) -> WittVector {
        WittVector::new(d.to_vec())
    }

    #[test]
    fn small_examples() {
        let f2 = Gf::new(2, 1).unwrap();
        let w2 = WittRing::new(&f2, 2).unwrap();
        assert_eq!(w2.add(&w(&[1, 0]), &w(&[1, 0])).unwrap(), w(&[0, 1]));
        assert_eq!(w2.invert_unit(&w(&[1, 1])).unwrap(), w(&[1, 1]));
        assert_eq!(w2.invert_unit(&w(&[0, 1])), Err(Error::NotAUnit));
        let w3 = WittRing::new(&f2, 3).unwrap();
        assert_eq!(w3.add(&w(&[1, 0]), &w(&[1, 0, 0])), Err(Error::ParamsMismatch));
        assert_eq!(w(&[0, 1, 0]).valuation(), 1);
        assert_eq!(w(&[0, 0, 0]).valuation(), 3);
        assert_eq!(w3.log(&w(&[1, 0, 0])).unwrap(), w(&[0, 0, 0]));
        assert!(matches!(w3.log(&w(&[0, 1, 0])), Err(Error::DomainError(_))));
    }

    #[test]
    fn one_term_product_rule() {
        // ξ(x)^{p^{-1}} p · ξ(y) has digits (0, x y^p)
        let gf = Gf::new(3, 2).unwrap();
        let wr = WittRing::new(&gf, 3).unwrap();
        for x in gf.elements() {
            for y in gf.elements() {
                let prod = wr.mul(&w(&[0, x, 0]), &w(&[y, 0, 0])).unwrap();
                assert_eq!(prod, w(&[0, gf.mul(x, gf.frob(y, 1)), 0]));
            }
        }
    }

    #[test]
    fn p_times_is_frobenius_shift() {
        for (p, m, s) in [(2, 1, 3), (2, 2, 3), (3, 1, 3), (2, 2, 2)] {
            let gf = Gf::new(p, m).unwrap();
            let wr = WittRing::new(&gf, s).unwrap();
            let pv = wr.teichmuller_digits(&wr.galois().from_int(p as i64));
            for g in wr.galois().elements() {
                let a = wr.teichmuller_digits(&g);
                let mut shifted = vec![0; s];
                for i in 1..s {
                    shifted[i] = gf.frob(a.digits[i - 1], 1);
                }
                assert_eq!(wr.mul(&pv, &a).unwrap().digits, shifted);
            }
        }
    }

    #[test]
    fn neg_and_additive_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, m, s) in [(2, 2, 3), (3, 1, 3), (5, 1, 2)] {
            let gf = Gf::new(p, m).unwrap();
            let wr = WittRing::new(&gf, s).unwrap();
            let gen = WittGeneric::new(gf.clone(), p, s).unwrap();
            for _ in 0..200 {
                let a = wr.random(&mut rng);
                assert_eq!(wr.add(&a, &wr.neg(&a).unwrap()).unwrap(), WittVector::zero(s));
                assert_eq!(gen.neg(&a.digits), wr.neg(&a).unwrap().digits);
            }
        }
    }

    #[test]
    fn generic_path_matches_galois_ring() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, s, m) in [(2, 3, 2), (3, 2, 1), (5, 2, 1), (2, 4, 1), (3, 3, 2)] {
            let gf = Gf::new(p, m).unwrap();
            let wr = WittRing::new(&gf, s).unwrap();
            let gen = WittGeneric::new(gf.clone(), p, s).unwrap();
            for _ in 0..300 {
                let (a, b) = (wr.random(&mut rng), wr.random(&mut rng));
                assert_eq!(gen.add(&a.digits, &b.digits), wr.add(&a, &b).unwrap().digits);
                assert_eq!(gen.mul(&a.digits, &b.digits), wr.mul(&a, &b).unwrap().digits);
            }
        }
    }

    #[test]
    fn dual_numbers_add_epsilon_parts_digitwise() {
        let gf = Gf::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = gf.q();
        let wd = WittGeneric::checked(Dual { gf: gf.clone() }, 3, 3, &mut rng, |r| {
            (r.gen_range(0..q), r.gen_range(0..q))
        })
        .unwrap();
        for _ in 0..50 {
            let a: Vec<(Fe, Fe)> = (0..3).map(|_| (0, gf.random(&mut rng))).collect();
            let b: Vec<(Fe, Fe)> = (0..3).map(|_| (0, gf.random(&mut rng))).collect();
            let sum = wd.add(&a, &b);
            for k in 0..3 {
                assert_eq!(sum[k], (0, gf.add(a[k].1, b[k].1)));
            }
            // c · (ε w) has digit k equal to c_0^{p^k} ε w_k
            let c: Vec<(Fe, Fe)> = (0..3).map(|_| (gf.random(&mut rng), 0)).collect();
            let prod = wd.mul(&c, &a);
            for k in 0..3 {
                assert_eq!(prod[k], (0, gf.mul(gf.frob(c[0].0, k as i64), a[k].1)));
            }
        }
    }

    #[test]
    fn polynomial_coefficients_evaluate_consistently() {
        let gf = Gf::new(2, 2).unwrap();
        let poly = PolyRing { gf: gf.clone() };
        let wp = WittGeneric::new(poly.clone(), 2, 3).unwrap();
        let wr = WittRing::new(&gf, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a: Vec<Vec<Fe>> = (0..3).map(|_| vec![gf.random(&mut rng), gf.random(&mut rng)]).collect();
        let b: Vec<Vec<Fe>> = (0..3).map(|_| vec![gf.random(&mut rng), 1]).collect();
        let prod = wp.mul(&a, &b);
        for t in gf.elements() {
            let at = WittVector::new(a.iter().map(|c| poly.eval(c, t)).collect());
            let bt = WittVector::new(b.iter().map(|c| poly.eval(c, t)).collect());
            let pt: Vec<Fe> = prod.iter().map(|c| poly.eval(c, t)).collect();
            assert_eq!(wr.mul(&at, &bt).unwrap().digits, pt);
        }
    }

    #[test]
    fn log_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, m, s) in [(3, 1, 3), (3, 2, 3), (2, 1, 4), (5, 1, 3)] {
            let gf = Gf::new(p, m).unwrap();
            let wr = WittRing::new(&gf, s).unwrap();
            let gr = wr.galois();
            let principal = |rng: &mut ChaCha8Rng| gr.add(&gr.one(), &gr.mul_p_pow(&gr.random(rng), 1));
            for _ in 0..200 {
                let (u, v) = (principal(&mut rng), principal(&mut rng));
                let lhs = galois_log(gr, &gr.mul(&u, &v)).unwrap();
                let rhs = gr.add(&galois_log(gr, &u).unwrap(), &galois_log(gr, &v).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn log_injective_on_principal_units_f3() {
        let gf = Gf::new(3, 1).unwrap();
        let wr = WittRing::new(&gf, 2).unwrap();
        let gr = wr.galois();
        let mut images: Vec<GrElem> = gr
            .elements()
            .into_iter()
            .filter(|g| gr.residue(g) == 1)
            .map(|g| galois_log(gr, &g).unwrap())
            .collect();
        let n = images.len();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), n);
    }

    #[test]
    fn log_matches_rational_series_over_integers() {
        // p = 3, s = 4, m = 1: compare with exact rationals mod 81
        use num_bigint::BigInt;
        use num_integer::Integer;
        let gf = Gf::new(3, 1).unwrap();
        let wr = WittRing::new(&gf, 4).unwrap();
        let gr = wr.galois();
        let md = BigInt::from(81);
        for a in [3i64, 6, 9, 12, 24, 78] {
            let u = gr.from_int(1 + a);
            let got = galois_log(gr, &u).unwrap();
            // Σ (-1)^{j-1} a^j / j as a rational, then reduced mod 81
            let mut num = BigInt::from(0);
            let mut den = BigInt::from(1);
            for j in 1..60i64 {
                let t = num_traits::pow(BigInt::from(a), j as usize);
                let sign = if j % 2 == 1 { 1 } else { -1 };
                num = num * j + &den * t * sign;
                den *= j;
                let g = num.gcd(&den);
                num /= &g;
                den /= &g;
            }
            let (_, inv, _) = {
                let e = den.extended_gcd(&md);
                (e.gcd, e.x, e.y)
            };
            let expect = (num * inv).mod_floor(&md);
            assert_eq!(BigInt::from(got.c[0]), expect, "a={a}");
        }
    }
}
