//! Small finite fields F_{p^m} with table-driven arithmetic.
//!
//! Elements are plain integer codes: the polynomial-basis coefficients
//! written base p. All arithmetic goes through a shared [`Gf`] handle.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Fe = u32;

const MAX_ORDER: u32 = 81;
const MAX_PRIME: u32 = 13;

/// Moduli `[c_0, .., c_m]` used for reproducible element codes.
pub fn conway_modulus(p: u32, m: u32) -> Option<Vec<u32>> {
    let v: &[u32] = match (p, m) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 1) => &[3, 1],
        (5, 2) => &[2, 4, 1],
        (7, 1) => &[4, 1],
        (7, 2) => &[3, 6, 1],
        (11, 1) => &[9, 1],
        (13, 1) => &[11, 1],
        _ => return None,
    };
    Some(v.to_vec())
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfOp {
    Add,
    Mul,
    Neg,
    Inv,
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<Fe>,
    mul: Vec<Fe>,
    neg: Vec<Fe>,
    inv: Vec<Fe>,
    frob: Vec<Fe>,
}

/// Handle on F_{p^m}; cheap to clone.
#[derive(Clone)]
pub struct Gf(Arc<Tables>);

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}{:?}", self.p(), self.m(), self.modulus())
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Gf {}

// dense polynomial helpers over F_p, coefficient vectors low degree first
fn poly_mod(a: &mut Vec<u32>, f: &[u32], p: u32) {
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while a.len() > df {
        let c = a.pop().unwrap();
        if c == 0 {
            continue;
        }
        let k = a.len() - df;
        let t = c * lead_inv % p;
        for i in 0..df {
            a[k + i] = (a[k + i] + p * p - t * f[i] % p) % p;
        }
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=d/2
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g = vec![0u32; deg + 1];
            let mut c = code;
            for gi in g.iter_mut().take(deg) {
                *gi = (c % p as u64) as u32;
                c /= p as u64;
            }
            g[deg] = 1;
            let mut r = f.to_vec();
            poly_mod(&mut r, &g, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl Gf {
    /// F_{p^m} with the built-in modulus.
    pub fn new(p: u32, m: u32) -> Result<Gf> {
        let modulus = conway_modulus(p, m).ok_or_else(|| {
            Error::UnsupportedField(format!("p={p}, m={m} outside the supported table"))
        })?;
        Gf::with_modulus(p, &modulus)
    }

    pub fn prime(p: u32) -> Result<Gf> {
        Gf::new(p, 1)
    }

    /// F_p[x]/(modulus); the modulus must be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Gf> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::UnsupportedField(format!("p={p}")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::UnsupportedField(format!("modulus {modulus:?} not monic over F_{p}")));
        }
        let m = (modulus.len() - 1) as u32;
        let q = p.checked_pow(m).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::UnsupportedField(format!("p^m = {p}^{m} exceeds {MAX_ORDER}"))
        })?;
        if !is_irreducible(modulus, p) {
            return Err(Error::Reducible(p));
        }
        let coeffs = |a: u32| -> Vec<u32> {
            let mut v = vec![0; m as usize];
            let mut a = a;
            for c in v.iter_mut() {
                *c = a % p;
                a /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let ca = coeffs(a);
            for b in 0..q {
                let cb = coeffs(b);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = encode(&s);
                let mut prod = vec![0u32; 2 * m as usize - 1];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                poly_mod(&mut prod, modulus, p);
                prod.resize(m as usize, 0);
                mul[a as usize * qs + b as usize] = encode(&prod);
            }
        }
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        let mut frob = vec![0; qs];
        for a in 0..qs {
            neg[a] = (0..q).find(|&b| add[a * qs + b as usize] == 0).unwrap();
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * qs + b as usize] == 1).unwrap();
            }
            let mut x = 1;
            for _ in 0..p {
                x = mul[x as usize * qs + a];
            }
            frob[a] = x;
        }
        Ok(Gf(Arc::new(Tables {
            p,
            m,
            q,
            modulus: modulus.to_vec(),
            add,
            mul,
            neg,
            inv,
            frob,
        })))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn m(&self) -> u32 {
        self.0.m
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn elements(&self) -> std::ops::Range<Fe> {
        0..self.0.q
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.0.add[(a * self.0.q + b) as usize]
    }
    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.0.mul[(a * self.0.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero, see [`Gf::try_inv`].
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero in {self:?}");
        self.0.inv[a as usize]
    }

    pub fn try_inv(&self, a: Fe) -> Result<Fe> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// a^{p^e}; negative e applies the inverse Frobenius.
    #[inline]
    pub fn frob(&self, a: Fe, e: i64) -> Fe {
        let k = e.rem_euclid(self.0.m as i64);
        let mut x = a;
        for _ in 0..k {
            x = self.0.frob[x as usize];
        }
        x
    }

    /// The image of an integer under Z -> F_p -> F_{p^m}.
    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.0.p as i64) as Fe
    }

    /// Coefficients of the element in the polynomial basis.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut a = a;
        (0..self.0.m)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let p = self.0.p;
        c.iter().rev().fold(0, |acc, &x| acc * p + x % p)
    }

    pub fn check(&self, a: Fe) -> Result<Fe> {
        if a < self.0.q {
            Ok(a)
        } else {
            Err(Error::InvalidElement(a))
        }
    }

    pub fn same_field(&self, other: &Gf) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }

    /// Checked arithmetic on codes. `b` is ignored for unary operations.
    pub fn ff_op(&self, op: FfOp, a: Fe, b: Fe) -> Result<Fe> {
        let a = self.check(a)?;
        let b = self.check(b)?;
        Ok(match op {
            FfOp::Add => self.add(a, b),
            FfOp::Mul => self.mul(a, b),
            FfOp::Neg => self.neg(a),
            FfOp::Inv => self.try_inv(a)?,
        })
    }

    /// The prime subfield as its own handle.
    pub fn prime_field(&self) -> Gf {
        Gf::prime(self.0.p).expect("prime field of a supported field")
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        rng.gen_range(0..self.0.q)
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        rng.gen_range(1..self.0.q)
    }
}

/// One term c * u_j^{p^e} of a semilinear equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemilinearTerm {
    pub unknown: usize,
    pub coeff: Fe,
    pub exp: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SemilinearEquation {
    pub terms: Vec<SemilinearTerm>,
    pub rhs: Fe,
}

impl SemilinearEquation {
    pub fn homogeneous(terms: Vec<SemilinearTerm>) -> Self {
        SemilinearEquation { terms, rhs: 0 }
    }
}

/// Affine solution set: particular + F_p-span of kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Fe>,
    pub kernel: Vec<Vec<Fe>>,
}

impl AffineSolution {
    /// Dimension of the kernel over F_p.
    pub fn prime_dim(&self) -> usize {
        self.kernel.len()
    }
}

/// Solves Σ_j c_ij u_j^{p^{e_ij}} = d_i by flattening F_{p^m} to F_p^m.
pub fn solve_semilinear(
    gf: &Gf,
    unknowns: usize,
    system: &[SemilinearEquation],
) -> Result<AffineSolution> {
    let m = gf.m() as usize;
    let p = gf.p();
    let fp = gf.prime_field();
    let cols = unknowns * m;
    let mut mat = crate::linalg::Mat::zero(system.len() * m, cols + 1);
    for (i, eq) in system.iter().enumerate() {
        for t in &eq.terms {
            if t.unknown >= unknowns {
                return Err(Error::Shape(format!("unknown {} of {}", t.unknown, unknowns)));
            }
            gf.check(t.coeff)?;
            for k in 0..m {
                let basis = p.pow(k as u32);
                let img = gf.coeffs(gf.mul(t.coeff, gf.frob(basis, t.exp)));
                for (r, c) in img.into_iter().enumerate() {
                    let e = mat.get(i * m + r, t.unknown * m + k);
                    mat.set(i * m + r, t.unknown * m + k, fp.add(e, c));
                }
            }
        }
        for (r, c) in gf.coeffs(gf.check(eq.rhs)?).into_iter().enumerate() {
            mat.set(i * m + r, cols, c);
        }
    }
    let pivots = mat.rref(&fp);
    if pivots.last() == Some(&cols) {
        return Err(Error::Inconsistent);
    }
    let mut part = vec![0u32; cols];
    for (row, &pc) in pivots.iter().enumerate() {
        part[pc] = mat.get(row, cols);
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![0u32; cols];
        v[f] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = fp.neg(mat.get(row, f));
        }
        kernel.push(v);
    }
    let pack = |v: &[u32]| -> Vec<Fe> { v.chunks(m).map(|c| gf.from_coeffs(c)).collect() };
    Ok(AffineSolution {
        particular: pack(&part),
        kernel: kernel.iter().map(|v| pack(v)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn supported() -> Vec<(u32, u32)> {
        vec![
            (2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6),
            (3, 1), (3, 2), (3, 3), (3, 4),
            (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (13, 1),
        ]
    }

    #[test]
    fn table_moduli_are_irreducible() {
        for (p, m) in supported() {
            assert!(Gf::new(p, m).is_ok(), "p={p} m={m}");
        }
        assert_eq!(Gf::with_modulus(2, &[1, 0, 1]), Err(Error::Reducible(2)));
        assert!(Gf::new(3, 5).is_err());
        assert!(Gf::new(17, 1).is_err());
    }

    #[test]
    fn small_examples() {
        let f2 = Gf::new(2, 1).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f4 = Gf::new(2, 2).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(f4.frob(2, 1), 3);
        assert_eq!(f2.frob(1, -1), 1);
        assert_eq!(f4.ff_op(FfOp::Inv, 0, 0), Err(Error::DivisionByZero));
        assert_eq!(f4.ff_op(FfOp::Add, 4, 0), Err(Error::InvalidElement(4)));
    }

    // schoolbook multiplication with explicit reduction, independent of the tables
    fn oracle_mul(gf: &Gf, a: Fe, b: Fe) -> Fe {
        let p = gf.p() as i64;
        let f: Vec<i64> = gf.modulus().iter().map(|&c| c as i64).collect();
        let m = gf.m() as usize;
        let ca: Vec<i64> = gf.coeffs(a).iter().map(|&c| c as i64).collect();
        let cb: Vec<i64> = gf.coeffs(b).iter().map(|&c| c as i64).collect();
        let mut prod = vec![0i64; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] += ca[i] * cb[j];
            }
        }
        for d in (m..2 * m).rev() {
            let c = prod[d];
            prod[d] = 0;
            for i in 0..m {
                prod[d - m + i] -= c * f[i];
            }
        }
        let out: Vec<u32> = prod[..m].iter().map(|c| c.rem_euclid(p) as u32).collect();
        gf.from_coeffs(&out)
    }

    #[test]
    fn multiplication_matches_schoolbook() {
        for (p, m) in supported() {
            let gf = Gf::new(p, m).unwrap();
            for a in gf.elements() {
                for b in gf.elements() {
                    assert_eq!(gf.mul(a, b), oracle_mul(&gf, a, b));
                }
            }
        }
    }

    #[test]
    fn field_axioms_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m) in supported() {
            let gf = Gf::new(p, m).unwrap();
            for _ in 0..1000 {
                let (a, b, c) = (gf.random(&mut rng), gf.random(&mut rng), gf.random(&mut rng));
                assert_eq!(gf.add(gf.add(a, b), c), gf.add(a, gf.add(b, c)));
                assert_eq!(gf.mul(gf.mul(a, b), c), gf.mul(a, gf.mul(b, c)));
                assert_eq!(gf.mul(a, gf.add(b, c)), gf.add(gf.mul(a, b), gf.mul(a, c)));
                assert_eq!(gf.add(a, gf.neg(a)), 0);
                if a != 0 {
                    assert_eq!(gf.mul(a, gf.inv(a)), 1);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, m) in supported() {
            let gf = Gf::new(p, m).unwrap();
            for _ in 0..200 {
                let (a, b) = (gf.random(&mut rng), gf.random(&mut rng));
                let e = rng.gen_range(-7..8);
                assert_eq!(gf.frob(gf.add(a, b), e), gf.add(gf.frob(a, e), gf.frob(b, e)));
                assert_eq!(gf.frob(gf.mul(a, b), e), gf.mul(gf.frob(a, e), gf.frob(b, e)));
                assert_eq!(gf.frob(a, m as i64), a);
                assert_eq!(gf.frob(gf.frob(a, -1), 1), a);
                assert_eq!(gf.frob(a, 1), gf.pow(a, p as u64));
            }
        }
    }

    fn term(unknown: usize, coeff: Fe, exp: i64) -> SemilinearTerm {
        SemilinearTerm { unknown, coeff, exp }
    }

    fn span_over_fp(gf: &Gf, sol: &AffineSolution) -> Vec<Vec<Fe>> {
        let p = gf.p();
        let k = sol.kernel.len();
        let mut out = Vec::new();
        for code in 0..p.pow(k as u32) {
            let mut v = sol.particular.clone();
            let mut c = code;
            for b in &sol.kernel {
                let coef = c % p;
                c /= p;
                for (x, y) in v.iter_mut().zip(b) {
                    *x = gf.add(*x, gf.mul(coef, *y));
                }
            }
            out.push(v);
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn semilinear_examples() {
        let f2 = Gf::new(2, 1).unwrap();
        let sol = solve_semilinear(
            &f2,
            1,
            &[SemilinearEquation::homogeneous(vec![term(0, 1, 1), term(0, 1, 0)])],
        )
        .unwrap();
        assert_eq!(span_over_fp(&f2, &sol), vec![vec![0], vec![1]]);

        let f9 = Gf::new(3, 2).unwrap();
        let sol = solve_semilinear(&f9, 3, &[]).unwrap();
        assert_eq!(sol.prime_dim(), 6);

        let f4 = Gf::new(2, 2).unwrap();
        let sol = solve_semilinear(
            &f4,
            1,
            &[SemilinearEquation::homogeneous(vec![term(0, 1, 1), term(0, 1, 0)])],
        )
        .unwrap();
        assert_eq!(sol.prime_dim(), 1);
        assert_eq!(span_over_fp(&f4, &sol), vec![vec![0], vec![1]]);

        let eq = SemilinearEquation { terms: vec![term(0, 0, 0)], rhs: 1 };
        assert_eq!(solve_semilinear(&f4, 1, &[eq]), Err(Error::Inconsistent));
    }

    #[test]
    fn semilinear_agrees_with_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, m) in [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2)] {
            let gf = Gf::new(p, m).unwrap();
            for _ in 0..40 {
                let nu = rng.gen_range(1..=2usize);
                let neq = rng.gen_range(1..=2usize);
                let mut sys = Vec::new();
                for _ in 0..neq {
                    let terms = (0..rng.gen_range(1..=3))
                        .map(|_| term(rng.gen_range(0..nu), gf.random(&mut rng), rng.gen_range(-2..3)))
                        .collect();
                    sys.push(SemilinearEquation { terms, rhs: gf.random(&mut rng) });
                }
                let mut brute = Vec::new();
                for code in 0..gf.q().pow(nu as u32) {
                    let u: Vec<Fe> = (0..nu).map(|j| code / gf.q().pow(j as u32) % gf.q()).collect();
                    let ok = sys.iter().all(|eq| {
                        let lhs = eq.terms.iter().fold(0, |acc, t| {
                            gf.add(acc, gf.mul(t.coeff, gf.frob(u[t.unknown], t.exp)))
                        });
                        lhs == eq.rhs
                    });
                    if ok {
                        brute.push(u);
                    }
                }
                brute.sort();
                match solve_semilinear(&gf, nu, &sys) {
                    Ok(sol) => assert_eq!(span_over_fp(&gf, &sol), brute),
                    Err(Error::Inconsistent) => assert!(brute.is_empty()),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}
