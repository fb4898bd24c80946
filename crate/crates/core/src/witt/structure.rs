//! Witt addition and multiplication polynomials from the ghost recursion.
//!
//! Variables are x_0..x_{s-1} followed by y_0..y_{s-1}.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Largest admissible monomial count of any intermediate polynomial.
pub const MONOMIAL_LIMIT: u128 = 400_000;

pub type Exps = Vec<u32>;

/// Polynomial with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    pub terms: HashMap<Exps, BigInt>,
}

impl IntPoly {
    fn var(nvars: usize, i: usize, e: u32, c: BigInt) -> IntPoly {
        let mut x = vec![0; nvars];
        x[i] = e;
        let mut terms = HashMap::new();
        terms.insert(x, c);
        IntPoly { terms }
    }

    fn add_assign(&mut self, other: &IntPoly, sign: i32) {
        for (k, v) in &other.terms {
            let e = self.terms.entry(k.clone()).or_insert_with(BigInt::zero);
            if sign >= 0 {
                *e += v;
            } else {
                *e -= v;
            }
        }
        self.terms.retain(|_, v| !v.is_zero());
    }

    fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut terms: HashMap<Exps, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k: Exps = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                *terms.entry(k).or_insert_with(BigInt::zero) += va * vb;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        IntPoly { terms }
    }

    fn pow(&self, e: u64) -> IntPoly {
        let nvars = self.terms.keys().next().map_or(0, |k| k.len());
        let mut r = IntPoly::var(nvars, 0, 0, BigInt::one());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut terms = HashMap::with_capacity(self.terms.len());
        for (k, v) in &self.terms {
            let (q, r) = v.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(k.clone(), q);
        }
        Some(IntPoly { terms })
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut top = vec![0u32; point.len()];
        for k in self.terms.keys() {
            for (t, &e) in top.iter_mut().zip(k) {
                *t = (*t).max(e);
            }
        }
        let powers: Vec<Vec<BigInt>> = point
            .iter()
            .zip(&top)
            .map(|(x, &t)| {
                let mut pw = vec![BigInt::from(1)];
                for _ in 0..t {
                    let next = pw.last().unwrap() * x;
                    pw.push(next);
                }
                pw
            })
            .collect();
        self.terms
            .iter()
            .map(|(k, v)| {
                k.iter().enumerate().filter(|(_, &e)| e > 0).fold(v.clone(), |acc, (i, &e)| acc * &powers[i][e as usize])
            })
            .sum()
    }

    fn reduce(&self, p: u32) -> ModPoly {
        let pb = BigInt::from(p);
        let mut terms: Vec<(u32, Exps)> = self
            .terms
            .iter()
            .filter_map(|(k, v)| {
                let c = v.mod_floor(&pb).to_u32().unwrap();
                (c != 0).then(|| (c, k.clone()))
            })
            .collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        ModPoly { terms }
    }
}

/// Polynomial with coefficients in F_p.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModPoly {
    pub terms: Vec<(u32, Exps)>,
}

impl ModPoly {
    /// Evaluates at the point (x, y) in any ring of characteristic p.
    pub fn eval<R: Ring>(&self, ring: &R, x: &[R::E], y: &[R::E]) -> R::E {
        let s = x.len();
        let mut cache: HashMap<(usize, u32), R::E> = HashMap::new();
        let mut acc = ring.zero();
        for (c, exps) in &self.terms {
            let mut term = ring.from_int(*c as i64);
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i < s { &x[i] } else { &y[i - s] };
                if ring.is_zero(base) {
                    term = ring.zero();
                    break;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| ring.pow(base, e as u64));
                term = ring.mul(&term, pw);
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }

    /// Weight of a monomial when variable j carries p^{j mod s}.
    pub fn weights(&self, p: u32, s: usize) -> Vec<(u64, u64)> {
        self.terms
            .iter()
            .map(|(_, e)| {
                let wx = e[..s].iter().enumerate().map(|(j, &k)| k as u64 * (p as u64).pow(j as u32)).sum();
                let wy = e[s..].iter().enumerate().map(|(j, &k)| k as u64 * (p as u64).pow(j as u32)).sum();
                (wx, wy)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructurePolynomialTable {
    pub p: u32,
    pub s: usize,
    pub add_polys: Vec<ModPoly>,
    pub mul_polys: Vec<ModPoly>,
}

/// Number of exponent vectors of weight w when variable j has weight p^j, j <= n.
fn weighted_count(p: u64, n: usize, w: u64) -> u128 {
    let mut ways = vec![0u128; w as usize + 1];
    ways[0] = 1;
    for j in 0..=n {
        let part = p.pow(j as u32) as usize;
        for t in part..=w as usize {
            ways[t] = ways[t].saturating_add(ways[t - part]);
        }
    }
    ways[w as usize]
}

fn guard(p: u32, s: usize) -> Result<()> {
    if s == 0 {
        return Ok(());
    }
    let n = s - 1;
    let w = (p as u64).checked_pow(n as u32).ok_or_else(|| Error::OverflowGuard("weight overflow".into()))?;
    if w > 10_000_000 {
        return Err(Error::OverflowGuard(format!("weight {w} for p={p}, s={s}")));
    }
    let single = weighted_count(p as u64, n, w);
    // addition mixes both variable sets, multiplication is bihomogeneous
    let add_bound = (0..=w).map(|a| weighted_count(p as u64, n, a) * weighted_count(p as u64, n, w - a)).sum::<u128>();
    let bound = add_bound.max(single.saturating_mul(single));
    if bound > MONOMIAL_LIMIT {
        return Err(Error::OverflowGuard(format!(
            "p={p}, s={s}: up to {bound} monomials exceeds {MONOMIAL_LIMIT}"
        )));
    }
    Ok(())
}

/// Exact integer Φ_0..Φ_{s-1} and Ψ_0..Ψ_{s-1}.
pub fn exact_structure_polynomials(p: u32, s: usize) -> Result<(Vec<IntPoly>, Vec<IntPoly>)> {
    guard(p, s)?;
    let nv = 2 * s;
    let pb = BigInt::from(p);
    let ghost = |offset: usize, n: usize| -> IntPoly {
        let mut w = IntPoly::default();
        for i in 0..=n {
            let e = p.pow((n - i) as u32);
            w.add_assign(&IntPoly::var(nv, offset + i, e, num_traits::pow(pb.clone(), i)), 1);
        }
        w
    };
    let mut add: Vec<IntPoly> = Vec::with_capacity(s);
    let mut mul: Vec<IntPoly> = Vec::with_capacity(s);
    // powers Φ_i^{p^{n-i}}, Ψ_i^{p^{n-i}} for the current n
    let mut add_pw: Vec<IntPoly> = Vec::new();
    let mut mul_pw: Vec<IntPoly> = Vec::new();
    for n in 0..s {
        for k in 0..add_pw.len() {
            add_pw[k] = add_pw[k].pow(p as u64);
            mul_pw[k] = mul_pw[k].pow(p as u64);
        }
        let wx = ghost(0, n);
        let wy = ghost(s, n);
        let mut num_add = wx.clone();
        num_add.add_assign(&wy, 1);
        let mut num_mul = wx.mul(&wy);
        for i in 0..n {
            let c = num_traits::pow(pb.clone(), i);
            num_add.add_assign(&add_pw[i].scale(&c), -1);
            num_mul.add_assign(&mul_pw[i].scale(&c), -1);
        }
        let d = num_traits::pow(pb.clone(), n);
        let phi = num_add.div_exact(&d).ok_or_else(|| Error::OverflowGuard("inexact division".into()))?;
        let psi = num_mul.div_exact(&d).ok_or_else(|| Error::OverflowGuard("inexact division".into()))?;
        add_pw.push(phi.clone());
        mul_pw.push(psi.clone());
        add.push(phi);
        mul.push(psi);
    }
    Ok((add, mul))
}

fn cache() -> &'static Mutex<HashMap<(u32, usize), Arc<StructurePolynomialTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<StructurePolynomialTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ and Ψ reduced mod p; memoized per (p, s).
pub fn generate_structure_polynomials(p: u32, s: usize) -> Result<Arc<StructurePolynomialTable>> {
    if s == 0 || s > 5 {
        return Err(Error::TruncationTooShort(format!("s={s} outside 1..=5")));
    }
    if let Some(t) = cache().lock().unwrap().get(&(p, s)) {
        return Ok(t.clone());
    }
    let (add, mul) = exact_structure_polynomials(p, s)?;
    let table = Arc::new(StructurePolynomialTable {
        p,
        s,
        add_polys: add.iter().map(|f| f.reduce(p)).collect(),
        mul_polys: mul.iter().map(|f| f.reduce(p)).collect(),
    });
    cache().lock().unwrap().entry((p, s)).or_insert_with(|| table.clone());
    Ok(table)
}

/// Ghost components w_n = Σ_{i<=n} p^i a_i^{p^{n-i}} over the integers.
pub fn ghost_components(p: u32, a: &[BigInt]) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    (0..a.len())
        .map(|n| {
            (0..=n)
                .map(|i| num_traits::pow(pb.clone(), i) * num_traits::pow(a[i].clone(), p.pow((n - i) as u32) as usize))
                .sum()
        })
        .collect()
}
