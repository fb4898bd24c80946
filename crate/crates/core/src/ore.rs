//! The truncated Ore ring O_s = k[θ]/θ^s with θ b = b^p θ.
//!
//! Row vectors in O_s^n form a left module; matrices act on the right.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Fe, Gf};
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OreElement {
    pub coeffs: Vec<Fe>,
}

impl OreElement {
    pub fn s(&self) -> usize {
        self.coeffs.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OreRing {
    pub gf: Gf,
    pub s: usize,
}

impl OreRing {
    pub fn new(gf: &Gf, s: usize) -> OreRing {
        OreRing { gf: gf.clone(), s }
    }

    pub fn zero(&self) -> OreElement {
        OreElement { coeffs: vec![0; self.s] }
    }

    pub fn one(&self) -> OreElement {
        self.constant(1)
    }

    pub fn constant(&self, a: Fe) -> OreElement {
        let mut e = self.zero();
        if self.s > 0 {
            e.coeffs[0] = a;
        }
        e
    }

    /// b θ^k.
    pub fn monomial(&self, b: Fe, k: usize) -> OreElement {
        let mut e = self.zero();
        if k < self.s {
            e.coeffs[k] = b;
        }
        e
    }

    pub fn theta(&self) -> OreElement {
        self.monomial(1, 1)
    }

    pub fn check(&self, a: &OreElement) -> Result<()> {
        if a.s() != self.s {
            return Err(Error::ParamsMismatch);
        }
        a.coeffs.iter().try_for_each(|&c| self.gf.check(c).map(|_| ()))
    }

    pub fn add(&self, a: &OreElement, b: &OreElement) -> OreElement {
        OreElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.gf.add(x, y)).collect() }
    }

    pub fn sub(&self, a: &OreElement, b: &OreElement) -> OreElement {
        OreElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.gf.sub(x, y)).collect() }
    }

    pub fn neg(&self, a: &OreElement) -> OreElement {
        OreElement { coeffs: a.coeffs.iter().map(|&x| self.gf.neg(x)).collect() }
    }

    /// c_k = Σ_{i+j=k} a_i b_j^{p^i}.
    pub fn mul(&self, a: &OreElement, b: &OreElement) -> OreElement {
        let g = &self.gf;
        let mut c = vec![0; self.s];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate().take(self.s - i) {
                if bj != 0 {
                    c[i + j] = g.add(c[i + j], g.mul(ai, g.frob(bj, i as i64)));
                }
            }
        }
        OreElement { coeffs: c }
    }

    pub fn checked_op(&self, a: &OreElement, b: &OreElement, mul: bool) -> Result<OreElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(if mul { self.mul(a, b) } else { self.add(a, b) })
    }

    /// Lowest θ-power with nonzero coefficient, s for zero.
    pub fn ord(&self, a: &OreElement) -> usize {
        a.coeffs.iter().position(|&c| c != 0).unwrap_or(self.s)
    }

    pub fn is_unit(&self, a: &OreElement) -> bool {
        a.coeffs.first().is_some_and(|&c| c != 0)
    }

    /// u with a = θ^v u; needs ord(a) >= v.
    pub fn factor_left(&self, a: &OreElement, v: usize) -> OreElement {
        let mut u = self.zero();
        for j in 0..self.s - v {
            u.coeffs[j] = self.gf.frob(a.coeffs[v + j], -(v as i64));
        }
        u
    }

    /// d with a = d θ^v; needs ord(a) >= v.
    pub fn factor_right(&self, a: &OreElement, v: usize) -> OreElement {
        let mut d = self.zero();
        for j in 0..self.s - v {
            d.coeffs[j] = a.coeffs[v + j];
        }
        d
    }

    /// Two-sided inverse of a unit, solved degree by degree.
    pub fn inv(&self, a: &OreElement) -> Result<OreElement> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let g = &self.gf;
        let a0inv = g.inv(a.coeffs[0]);
        let mut b = self.zero();
        b.coeffs[0] = a0inv;
        for k in 1..self.s {
            let mut acc = 0;
            for i in 1..=k {
                acc = g.add(acc, g.mul(a.coeffs[i], g.frob(b.coeffs[k - i], i as i64)));
            }
            b.coeffs[k] = g.neg(g.mul(a0inv, acc));
        }
        Ok(b)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> OreElement {
        OreElement { coeffs: (0..self.s).map(|_| self.gf.random(rng)).collect() }
    }

    /// All coefficient vectors with coefficients zero from index `below` on.
    pub fn all_truncated(&self, below: usize) -> Vec<OreElement> {
        let q = self.gf.q() as u64;
        let below = below.min(self.s);
        (0..q.pow(below as u32))
            .map(|mut code| {
                let mut e = self.zero();
                for c in e.coeffs.iter_mut().take(below) {
                    *c = (code % q) as Fe;
                    code /= q;
                }
                e
            })
            .collect()
    }
}

/// n×n matrix over O_s, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OreMatrix {
    pub n: usize,
    pub entries: Vec<OreElement>,
}

impl OreMatrix {
    pub fn identity(ring: &OreRing, n: usize) -> OreMatrix {
        let entries = (0..n * n).map(|k| if k / n == k % n { ring.one() } else { ring.zero() }).collect();
        OreMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<OreElement>>) -> OreMatrix {
        let n = rows.len();
        OreMatrix { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &OreElement {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<OreElement>> {
        self.entries.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn mul(&self, ring: &OreRing, other: &OreMatrix) -> OreMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ring.zero();
                for k in 0..n {
                    acc = ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        OreMatrix { n, entries }
    }

    /// The θ^0 coefficient matrix A_0.
    pub fn constant_part(&self) -> Mat {
        Mat { rows: self.n, cols: self.n, data: self.entries.iter().map(|e| e.coeffs[0]).collect() }
    }

    pub fn random<R: Rng + ?Sized>(ring: &OreRing, n: usize, rng: &mut R) -> OreMatrix {
        OreMatrix { n, entries: (0..n * n).map(|_| ring.random(rng)).collect() }
    }

    pub fn random_invertible<R: Rng + ?Sized>(ring: &OreRing, n: usize, rng: &mut R) -> OreMatrix {
        loop {
            let a = Self::random(ring, n, rng);
            if a.constant_part().det(&ring.gf) != 0 {
                return a;
            }
        }
    }
}

/// Row vector times matrix (right action).
pub fn act_right(ring: &OreRing, v: &[OreElement], a: &OreMatrix) -> Vec<OreElement> {
    (0..a.n)
        .map(|j| {
            v.iter().enumerate().fold(ring.zero(), |acc, (k, x)| ring.add(&acc, &ring.mul(x, a.get(k, j))))
        })
        .collect()
}

/// Invertibility is decided by A_0; the inverse is lifted by Newton steps.
pub fn ore_matrix_invertible(ring: &OreRing, a: &OreMatrix) -> Option<OreMatrix> {
    let a0inv = a.constant_part().inverse(&ring.gf).ok()?;
    let n = a.n;
    let mut x = OreMatrix {
        n,
        entries: a0inv.data.iter().map(|&c| ring.constant(c)).collect(),
    };
    let id = OreMatrix::identity(ring, n);
    let mut prec = 1;
    while prec < ring.s {
        // X <- X (2I - A X)
        let ax = a.mul(ring, &x);
        let corr = OreMatrix {
            n,
            entries: id.entries.iter().zip(&ax.entries).map(|(i, e)| ring.sub(&ring.add(i, i), e)).collect(),
        };
        x = x.mul(ring, &corr);
        prec *= 2;
    }
    debug_assert_eq!(a.mul(ring, &x), id);
    Some(x)
}

/// Elementary divisors (s_1 >= .. >= s_n) of O_s^n / M, M the left
/// submodule spanned by `rows`.
pub fn ore_smith(ring: &OreRing, rows: &[Vec<OreElement>], n: usize) -> Vec<usize> {
    let s = ring.s;
    let mut mat: Vec<Vec<OreElement>> = rows.to_vec();
    let m = mat.len();
    let mut divs = Vec::with_capacity(n);
    let mut k = 0;
    while k < m.min(n) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in mat.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                let o = ring.ord(e);
                if o < s && best.is_none_or(|b| o < b.0) {
                    best = Some((o, i, j));
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        mat.swap(k, bi);
        for row in mat.iter_mut() {
            row.swap(k, bj);
        }
        // right-multiply column k by u^{-1} so the pivot becomes θ^v
        let u = ring.factor_left(&mat[k][k], v);
        let uinv = ring.inv(&u).expect("pivot cofactor is a unit");
        for row in mat.iter_mut() {
            row[k] = ring.mul(&row[k], &uinv);
        }
        // clear the pivot row with column operations
        for j in k + 1..n {
            let b = mat[k][j].clone();
            if ring.ord(&b) == s {
                continue;
            }
            let c = ring.factor_left(&b, v);
            for row in mat.iter_mut() {
                let t = ring.mul(&row[k], &c);
                row[j] = ring.sub(&row[j], &t);
            }
        }
        // clear the pivot column with left row operations
        let pivot_row = mat[k].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == k || ring.ord(&row[k]) == s {
                continue;
            }
            let d = ring.factor_right(&row[k], v);
            for j in 0..n {
                let t = ring.mul(&d, &pivot_row[j]);
                row[j] = ring.sub(&row[j], &t);
            }
        }
        divs.push(v);
        k += 1;
    }
    while divs.len() < n {
        divs.push(s);
    }
    divs.sort_unstable_by(|a, b| b.cmp(a));
    divs
}

fn check_type(ty: &[usize], n: usize, r: usize) -> Result<()> {
    if ty.len() != n
        || ty.iter().sum::<usize>() != n * r
        || ty.iter().any(|&x| x > n * r)
        || ty.windows(2).any(|w| w[0] < w[1])
    {
        return Err(Error::TypeInvalid(format!("{ty:?} for n={n}, r={r}")));
    }
    Ok(())
}

/// Coefficients left free in GL(n, O/θ^{nr}) by ord(a_ij) >= s_j - s_i.
pub fn stabilizer_dimension(ty: &[usize], n: usize, r: usize) -> Result<usize> {
    check_type(ty, n, r)?;
    let nr = n * r;
    let mut free = 0;
    for i in 0..n {
        for j in 0..n {
            let need = ty[j].saturating_sub(ty[i]).min(nr);
            free += nr - need;
        }
    }
    Ok(free)
}

pub fn orbit_dimension(ty: &[usize], n: usize, r: usize) -> Result<usize> {
    check_type(ty, n, r)?;
    let mut d = 0;
    for i in 0..n {
        for j in i + 1..n {
            d += ty[i] - ty[j];
        }
    }
    Ok(d)
}

/// Canonical lower-triangular generators of the left submodule spanned by
/// `rows`: pivot θ^{d_j} at column j, entries left of a pivot truncated
/// below the order of the pivot in their column.
pub fn ore_canonical(ring: &OreRing, rows: &[Vec<OreElement>], n: usize) -> (Vec<usize>, Vec<Vec<OreElement>>) {
    let s = ring.s;
    let mut pool: Vec<Vec<OreElement>> =
        rows.iter().filter(|r| r.iter().any(|e| ring.ord(e) < s)).cloned().collect();
    let zero_row = vec![ring.zero(); n];
    let mut out = vec![zero_row.clone(); n];
    let mut d = vec![s; n];
    for i in (0..n).rev() {
        let best = pool
            .iter()
            .enumerate()
            .map(|(k, r)| (ring.ord(&r[i]), k))
            .filter(|&(o, _)| o < s)
            .min();
        let Some((v, idx)) = best else { continue };
        let mut piv = pool.swap_remove(idx);
        let u = ring.factor_right(&piv[i], v);
        let uinv = ring.inv(&u).expect("unit");
        piv = piv.iter().map(|e| ring.mul(&uinv, e)).collect();
        for r in pool.iter_mut() {
            if ring.ord(&r[i]) == s {
                continue;
            }
            let e = ring.factor_right(&r[i], v);
            for j in 0..n {
                let t = ring.mul(&e, &piv[j]);
                r[j] = ring.sub(&r[j], &t);
            }
        }
        if v > 0 {
            let th = ring.monomial(1, s - v);
            pool.push(piv.iter().map(|e| ring.mul(&th, e)).collect());
        }
        pool.retain(|r| r.iter().any(|e| ring.ord(e) < s));
        out[i] = piv;
        d[i] = v;
    }
    for j in 0..n {
        for i in (0..j).rev() {
            if d[i] >= s {
                continue;
            }
            let b = out[j][i].clone();
            let mut high = b.clone();
            for c in high.coeffs.iter_mut().take(d[i]) {
                *c = 0;
            }
            if ring.ord(&high) == s {
                continue;
            }
            let e = ring.factor_right(&high, d[i]);
            let row_i = out[i].clone();
            for (c, x) in out[j].iter_mut().zip(&row_i) {
                *c = ring.sub(c, &ring.mul(&e, x));
            }
        }
    }
    (d, out)
}

/// Number of left submodules of colength `colength` in O_s^n over F_q,
/// grouped by quotient type. Errors if the candidate count exceeds `cap`.
pub fn count_ore_lattices(
    ring: &OreRing,
    n: usize,
    colength: usize,
    cap: u64,
) -> Result<BTreeMap<Vec<usize>, u64>> {
    let s = ring.s;
    let q = ring.gf.q() as u64;
    let pivots = pivot_vectors(n, s, colength);
    let states: u64 = pivots.iter().map(|d| candidate_count(d, q, s)).sum();
    if states > cap {
        return Err(Error::SizeGuard(format!("{states} candidates exceed {cap}")));
    }
    let mut counts = BTreeMap::new();
    for d in pivots {
        let choices: Vec<Vec<OreElement>> = (0..n).map(|i| ring.all_truncated(d[i])).collect();
        // free slots (j, i) with i < j and d_j < s
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|j| (0..j).map(move |i| (j, i))).filter(|&(j, _)| d[j] < s).collect();
        let total: u64 = slots.iter().map(|&(_, i)| choices[i].len() as u64).product();
        for mut code in 0..total {
            let mut rows = vec![vec![ring.zero(); n]; n];
            for j in 0..n {
                if d[j] < s {
                    rows[j][j] = ring.monomial(1, d[j]);
                }
            }
            for &(j, i) in &slots {
                let len = choices[i].len() as u64;
                rows[j][i] = choices[i][(code % len) as usize].clone();
                code /= len;
            }
            let (d2, canon) = ore_canonical(ring, &rows, n);
            if d2 == d && canon == rows {
                *counts.entry(ore_smith(ring, &rows, n)).or_insert(0) += 1;
            }
        }
    }
    Ok(counts)
}

pub(crate) fn pivot_vectors(n: usize, s: usize, colength: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, left: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left.min(s) {
            cur[i] = v;
            rec(i + 1, left - v, s, cur, out);
        }
    }
    rec(0, colength, s, &mut cur, &mut out);
    out
}

pub(crate) fn candidate_count(d: &[usize], q: u64, s: usize) -> u64 {
    let n = d.len();
    let mut c: u64 = 1;
    for j in 0..n {
        if d[j] < s {
            for &di in d.iter().take(j) {
                c = c.saturating_mul(q.saturating_pow(di.min(s) as u32));
            }
        }
    }
    c
}

/// All partitions of `total` into exactly n nonincreasing parts bounded by `max`.
pub fn admissible_types(n: usize, total: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(n: usize, left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=left.min(cap)).rev() {
            cur.push(v);
            rec(n, left - v, v, cur, out);
            cur.pop();
        }
    }
    rec(n, total, max, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn defining_relation() {
        let gf = Gf::new(2, 2).unwrap();
        let o = OreRing::new(&gf, 4);
        for a in gf.elements() {
            for b in gf.elements() {
                let lhs = o.mul(&o.monomial(a, 1), &o.monomial(b, 1));
                assert_eq!(lhs, o.monomial(gf.mul(a, gf.frob(b, 1)), 2));
            }
            let t = o.sub(&o.mul(&o.theta(), &o.constant(a)), &o.mul(&o.constant(gf.frob(a, 1)), &o.theta()));
            assert_eq!(t, o.zero());
        }
    }

    #[test]
    fn associativity_and_inverse() {
        let gf = Gf::new(3, 2).unwrap();
        let o = OreRing::new(&gf, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let (a, b, c) = (o.random(&mut rng), o.random(&mut rng), o.random(&mut rng));
            assert_eq!(o.mul(&o.mul(&a, &b), &c), o.mul(&a, &o.mul(&b, &c)));
            if o.is_unit(&a) {
                let ai = o.inv(&a).unwrap();
                assert_eq!(o.mul(&a, &ai), o.one());
                assert_eq!(o.mul(&ai, &a), o.one());
            }
            let v = o.ord(&a);
            if v < 3 {
                assert_eq!(o.mul(&o.monomial(1, v), &o.factor_left(&a, v)), a);
                assert_eq!(o.mul(&o.factor_right(&a, v), &o.monomial(1, v)), a);
            }
        }
    }

    #[test]
    fn matrix_inverse() {
        let gf = Gf::new(2, 2).unwrap();
        let o = OreRing::new(&gf, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..4 {
            for _ in 0..200 {
                let a = OreMatrix::random_invertible(&o, n, &mut rng);
                let inv = ore_matrix_invertible(&o, &a).unwrap();
                assert_eq!(a.mul(&o, &inv), OreMatrix::identity(&o, n));
                assert_eq!(inv.mul(&o, &a), OreMatrix::identity(&o, n));
            }
        }
        // I + θN is always invertible
        let n_mat = OreMatrix::random(&o, 2, &mut rng);
        let th = OreMatrix { n: 2, entries: n_mat.entries.iter().map(|e| o.mul(&o.theta(), e)).collect() };
        let id = OreMatrix::identity(&o, 2);
        let a = OreMatrix { n: 2, entries: id.entries.iter().zip(&th.entries).map(|(x, y)| o.add(x, y)).collect() };
        assert!(ore_matrix_invertible(&o, &a).is_some());
        let sing = OreMatrix::from_rows(vec![vec![o.theta(), o.one()], vec![o.zero(), o.zero()]]);
        assert!(ore_matrix_invertible(&o, &sing).is_none());
    }

    #[test]
    fn smith_examples_and_invariance() {
        let gf = Gf::new(3, 1).unwrap();
        let o = OreRing::new(&gf, 3);
        let diag = vec![vec![o.monomial(1, 1), o.zero()], vec![o.zero(), o.monomial(1, 2)]];
        assert_eq!(ore_smith(&o, &diag, 2), vec![2, 1]);
        let m = vec![vec![o.theta(), o.one()], vec![o.zero(), o.theta()]];
        assert_eq!(ore_smith(&o, &m, 2), vec![2, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let rows: Vec<Vec<OreElement>> = (0..2).map(|_| (0..2).map(|_| o.random(&mut rng)).collect()).collect();
            let ty = ore_smith(&o, &rows, 2);
            let a = OreMatrix::random_invertible(&o, 2, &mut rng);
            let moved: Vec<Vec<OreElement>> = rows.iter().map(|r| act_right(&o, r, &a)).collect();
            assert_eq!(ore_smith(&o, &moved, 2), ty);
            // left row operations preserve the submodule
            let c = o.random(&mut rng);
            let mixed = vec![rows[0].clone(), rows[1].iter().zip(&rows[0]).map(|(x, y)| o.add(x, &o.mul(&c, y))).collect()];
            assert_eq!(ore_smith(&o, &mixed, 2), ty);
        }
    }

    #[test]
    fn dimension_formulas() {
        assert_eq!(stabilizer_dimension(&[2, 0], 2, 1).unwrap(), 6);
        assert_eq!(orbit_dimension(&[2, 0], 2, 1).unwrap(), 2);
        assert_eq!(orbit_dimension(&[1, 1], 2, 1).unwrap(), 0);
        assert_eq!(stabilizer_dimension(&[1, 1], 2, 1).unwrap(), 8);
        assert_eq!(orbit_dimension(&[2, 1, 0], 3, 1).unwrap(), 4);
        assert!(orbit_dimension(&[3, 1, 0], 3, 1).is_err());
        for n in 2..5 {
            for r in 1..3 {
                for ty in admissible_types(n, n * r, n * r) {
                    let total = stabilizer_dimension(&ty, n, r).unwrap() + orbit_dimension(&ty, n, r).unwrap();
                    assert_eq!(total, n * n * n * r);
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_a_span_invariant() {
        let gf = Gf::new(2, 1).unwrap();
        let o = OreRing::new(&gf, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let rows: Vec<Vec<OreElement>> = (0..3).map(|_| (0..2).map(|_| o.random(&mut rng)).collect()).collect();
            let (d, canon) = ore_canonical(&o, &rows, 2);
            assert_eq!(ore_canonical(&o, &canon, 2), (d.clone(), canon.clone()));
            let a = OreMatrix::random_invertible(&o, 3, &mut rng);
            let mixed: Vec<Vec<OreElement>> = (0..3)
                .map(|i| {
                    (0..2)
                        .map(|j| (0..3).fold(o.zero(), |acc, k| o.add(&acc, &o.mul(a.get(i, k), &rows[k][j]))))
                        .collect()
                })
                .collect();
            assert_eq!(ore_canonical(&o, &mixed, 2).1, canon);
        }
    }

    #[test]
    fn stabilizer_point_count_over_f2() {
        // 𝔏(2,0) in O_2^2: count matrices with 𝔏 A ⊆ 𝔏
        let gf = Gf::new(2, 1).unwrap();
        let o = OreRing::new(&gf, 2);
        let all = o.all_truncated(2);
        let lattice = vec![vec![o.zero(), o.one()]];
        let target = ore_canonical(&o, &lattice, 2).1;
        let mut stab = 0u64;
        let mut stab_gl = 0u64;
        let mut gl = 0u64;
        for a in &all {
            for b in &all {
                for c in &all {
                    for d in &all {
                        let m = OreMatrix::from_rows(vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]);
                        let inv = ore_matrix_invertible(&o, &m).is_some();
                        gl += inv as u64;
                        let mut gens = target.clone();
                        gens.extend(target.iter().map(|r| act_right(&o, r, &m)));
                        if ore_canonical(&o, &gens, 2).1 == target {
                            stab += 1;
                            stab_gl += inv as u64;
                        }
                    }
                }
            }
        }
        assert_eq!(stab, 1 << stabilizer_dimension(&[2, 0], 2, 1).unwrap());
        let counts = count_ore_lattices(&o, 2, 2, 1 << 20).unwrap();
        assert_eq!(gl / stab_gl, counts[&vec![2, 0]]);
    }

    #[test]
    fn lattice_counts_for_two_by_two() {
        for (p, m) in [(2, 1), (2, 2), (3, 1)] {
            let gf = Gf::new(p, m).unwrap();
            let q = gf.q() as u64;
            let o = OreRing::new(&gf, 2);
            let counts = count_ore_lattices(&o, 2, 2, 1 << 20).unwrap();
            assert_eq!(counts[&vec![2, 0]], q * q + q);
            assert_eq!(counts[&vec![1, 1]], 1);
        }
    }
}
