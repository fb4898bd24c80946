//! Lattices in W_s(F_q)^n: determinants, Smith and Hermite forms,
//! membership, enumeration, tangent spaces and deformation families.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::ring::Ring;
use crate::witt::{GaloisRing, GrElem};

mod family;
mod tangent;

pub use family::*;
pub use tangent::*;

/// Matrix over W_s stored column-major; columns are the spanning vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<GrElem>,
}

impl WittMatrix {
    pub fn zero(rows: usize, cols: usize) -> WittMatrix {
        WittMatrix { rows, cols, data: vec![GrElem::ZERO; rows * cols] }
    }

    pub fn identity(gr: &GaloisRing, n: usize) -> WittMatrix {
        let mut m = WittMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, gr.one());
        }
        m
    }

    pub fn diagonal(gr: &GaloisRing, exps: &[u32]) -> WittMatrix {
        let mut m = WittMatrix::zero(exps.len(), exps.len());
        for (i, &e) in exps.iter().enumerate() {
            m.set(i, i, gr.p_pow(e));
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[Vec<GrElem>]) -> WittMatrix {
        assert!(cols.iter().all(|c| c.len() == rows), "ragged columns");
        WittMatrix { rows, cols: cols.len(), data: cols.concat() }
    }

    /// Columns given as Witt digit vectors.
    pub fn from_digit_cols(gr: &GaloisRing, cols: &[Vec<Vec<Fe>>]) -> Result<WittMatrix> {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut out = Vec::with_capacity(cols.len());
        for c in cols {
            if c.len() != rows {
                return Err(Error::Shape("ragged columns".into()));
            }
            let mut col = Vec::with_capacity(rows);
            for d in c {
                if d.len() != gr.s() as usize {
                    return Err(Error::ParamsMismatch);
                }
                for &x in d {
                    gr.field().check(x)?;
                }
                col.push(gr.from_digits(d));
            }
            out.push(col);
        }
        Ok(WittMatrix::from_cols(rows, &out))
    }

    pub fn to_digit_cols(&self, gr: &GaloisRing) -> Vec<Vec<Vec<Fe>>> {
        (0..self.cols).map(|j| self.col(j).iter().map(|g| gr.to_digits(g)).collect()).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> GrElem {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: GrElem) {
        self.data[j * self.rows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[GrElem] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> Vec<Vec<GrElem>> {
        (0..self.cols).map(|j| self.col(j).to_vec()).collect()
    }

    pub fn mul(&self, gr: &GaloisRing, other: &WittMatrix) -> WittMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = WittMatrix::zero(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == GrElem::ZERO {
                    continue;
                }
                for i in 0..self.rows {
                    let t = gr.mul(&self.get(i, k), &b);
                    let e = gr.add(&out.get(i, j), &t);
                    out.set(i, j, e);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, gr: &GaloisRing, v: &[GrElem]) -> Vec<GrElem> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![GrElem::ZERO; self.rows];
        for (j, x) in v.iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                *o = gr.add(o, &gr.mul(&self.get(i, j), x));
            }
        }
        out
    }

    /// Gauss-Jordan with unit pivots.
    pub fn inverse(&self, gr: &GaloisRing) -> Result<WittMatrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Shape(format!("{}x{} is not square", n, self.cols)));
        }
        let mut m = self.clone();
        let mut inv = WittMatrix::identity(gr, n);
        for c in 0..n {
            let r = (c..n).find(|&r| gr.is_unit(&m.get(r, c))).ok_or(Error::Singular)?;
            for x in [&mut m, &mut inv] {
                for k in 0..n {
                    let t = x.get(c, k);
                    x.set(c, k, x.get(r, k));
                    x.set(r, k, t);
                }
            }
            let pinv = gr.inv(&m.get(c, c))?;
            for x in [&mut m, &mut inv] {
                for k in 0..n {
                    let e = gr.mul(&x.get(c, k), &pinv);
                    x.set(c, k, e);
                }
            }
            for r2 in 0..n {
                let f = m.get(r2, c);
                if r2 == c || f == GrElem::ZERO {
                    continue;
                }
                for x in [&mut m, &mut inv] {
                    for k in 0..n {
                        let e = gr.sub(&x.get(r2, k), &gr.mul(&f, &x.get(c, k)));
                        x.set(r2, k, e);
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn random<R: Rng + ?Sized>(gr: &GaloisRing, rows: usize, cols: usize, rng: &mut R) -> WittMatrix {
        WittMatrix { rows, cols, data: (0..rows * cols).map(|_| gr.random(rng)).collect() }
    }

    /// Uniform element of GL(n, W_s): rejection on the residue determinant.
    pub fn random_invertible<R: Rng + ?Sized>(gr: &GaloisRing, n: usize, rng: &mut R) -> WittMatrix {
        loop {
            let m = WittMatrix::random(gr, n, n, rng);
            if gr.is_unit(&det(gr, &m)) {
                return m;
            }
        }
    }
}

/// Laplace expansion along the first column; fine for the small n used here.
pub fn det_generic<R: Ring>(ring: &R, cols: &[Vec<R::E>]) -> R::E {
    let n = cols.len();
    fn rec<R: Ring>(ring: &R, cols: &[Vec<R::E>], rows: &mut Vec<usize>, c: usize) -> R::E {
        if c == cols.len() {
            return ring.one();
        }
        let mut acc = ring.zero();
        for k in 0..rows.len() {
            let r = rows.remove(k);
            let a = &cols[c][r];
            if !ring.is_zero(a) {
                let minor = rec(ring, cols, rows, c + 1);
                let t = ring.mul(a, &minor);
                acc = if k % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
            }
            rows.insert(k, r);
        }
        acc
    }
    let mut rows: Vec<usize> = (0..n).collect();
    rec(ring, cols, &mut rows, 0)
}

pub fn det(gr: &GaloisRing, u: &WittMatrix) -> GrElem {
    assert_eq!(u.rows, u.cols, "determinant of a non-square matrix");
    det_generic(gr, &u.columns())
}

/// Digits of det U and, for an extra column v, of each Δ_j (column j replaced by v).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminantDigits {
    pub delta: Vec<Fe>,
    pub eta: Vec<Vec<Fe>>,
}

pub fn determinant_digits(gr: &GaloisRing, u: &WittMatrix, v: Option<&[GrElem]>) -> Result<DeterminantDigits> {
    if u.rows != u.cols {
        return Err(Error::Shape(format!("{}x{} is not square", u.rows, u.cols)));
    }
    let delta = gr.to_digits(&det(gr, u));
    let mut eta = Vec::new();
    if let Some(v) = v {
        if v.len() != u.rows {
            return Err(Error::ParamsMismatch);
        }
        for j in 0..u.cols {
            let mut cols = u.columns();
            cols[j] = v.to_vec();
            eta.push(gr.to_digits(&det_generic(gr, &cols)));
        }
    }
    Ok(DeterminantDigits { delta, eta })
}

/// Column-replacement determinants Δ_j over any coefficient ring.
pub fn replaced_determinants<R: Ring>(ring: &R, cols: &[Vec<R::E>], v: &[R::E]) -> Vec<R::E> {
    (0..cols.len())
        .map(|j| {
            let mut c = cols.to_vec();
            c[j] = v.to_vec();
            det_generic(ring, &c)
        })
        .collect()
}

pub fn is_discriminant_basis(gr: &GaloisRing, u: &WittMatrix, nr: u32) -> Result<bool> {
    if gr.s() <= nr {
        return Err(Error::TruncationTooShort(format!("s = {} must exceed nr = {nr}", gr.s())));
    }
    if u.rows != u.cols {
        return Err(Error::Shape(format!("{}x{} is not square", u.rows, u.cols)));
    }
    Ok(gr.valuation(&det(gr, u)) == nr)
}

/// A·U·B = diag(p^{diag_i}); `ty` is diag sorted nonincreasing, zero columns counted as s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub ty: Vec<u32>,
    pub diag: Vec<u32>,
    pub a: WittMatrix,
    pub b: WittMatrix,
}

pub fn smith_form(gr: &GaloisRing, u: &WittMatrix) -> SmithForm {
    let (n, k) = (u.rows, u.cols);
    let s = gr.s();
    let mut m = u.clone();
    let mut a = WittMatrix::identity(gr, n);
    let mut b = WittMatrix::identity(gr, k);
    let mut diag = vec![s; n];
    let swap_rows = |x: &mut WittMatrix, i: usize, j: usize| {
        for c in 0..x.cols {
            let t = x.get(i, c);
            x.set(i, c, x.get(j, c));
            x.set(j, c, t);
        }
    };
    let swap_cols = |x: &mut WittMatrix, i: usize, j: usize| {
        for r in 0..x.rows {
            let t = x.get(r, i);
            x.set(r, i, x.get(r, j));
            x.set(r, j, t);
        }
    };
    for t in 0..n.min(k) {
        let mut best: Option<(u32, usize, usize)> = None;
        for j in t..k {
            for i in t..n {
                let v = gr.valuation(&m.get(i, j));
                if v < s && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        swap_rows(&mut m, t, bi);
        swap_rows(&mut a, t, bi);
        swap_cols(&mut m, t, bj);
        swap_cols(&mut b, t, bj);
        let uinv = gr.inv(&gr.div_p_pow(&m.get(t, t), v)).expect("pivot cofactor is a unit");
        for x in [&mut m, &mut b] {
            for r in 0..x.rows {
                let e = gr.mul(&x.get(r, t), &uinv);
                x.set(r, t, e);
            }
        }
        for i in 0..n {
            if i == t || m.get(i, t) == GrElem::ZERO {
                continue;
            }
            let f = gr.div_p_pow(&m.get(i, t), v);
            for x in [&mut m, &mut a] {
                for c in 0..x.cols {
                    let e = gr.sub(&x.get(i, c), &gr.mul(&f, &x.get(t, c)));
                    x.set(i, c, e);
                }
            }
        }
        for j in 0..k {
            if j == t || m.get(t, j) == GrElem::ZERO {
                continue;
            }
            let f = gr.div_p_pow(&m.get(t, j), v);
            for x in [&mut m, &mut b] {
                for r in 0..x.rows {
                    let e = gr.sub(&x.get(r, j), &gr.mul(&x.get(r, t), &f));
                    x.set(r, j, e);
                }
            }
        }
        diag[t] = v;
    }
    let mut ty = diag.clone();
    ty.sort_unstable_by(|x, y| y.cmp(x));
    SmithForm { ty, diag, a, b }
}

/// Type of the column span, i.e. of F/L.
pub fn lattice_type(gr: &GaloisRing, u: &WittMatrix) -> Vec<u32> {
    smith_form(gr, u).ty
}

/// Column span in p-adic Hermite form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    pub span: WittMatrix,
    pub ty: Vec<u32>,
    pub colength: u32,
}

impl Lattice {
    pub fn n(&self) -> usize {
        self.span.rows
    }

    /// Pivot exponents d_i of the Hermite form (s for an empty row).
    pub fn pivots(&self, gr: &GaloisRing) -> Vec<u32> {
        (0..self.n()).map(|i| gr.valuation(&self.span.get(i, i))).collect()
    }
}

/// Upper-triangular generators with pivots exactly p^{d_i}; entries right of
/// a pivot are reduced to their digit-truncated representative mod p^{d_i}.
pub fn hermite_form(gr: &GaloisRing, u: &WittMatrix) -> (Vec<u32>, WittMatrix) {
    let n = u.rows;
    let s = gr.s();
    let zero = |c: &Vec<GrElem>| c.iter().all(|x| *x == GrElem::ZERO);
    let mut pool: Vec<Vec<GrElem>> = u.columns().into_iter().filter(|c| !zero(c)).collect();
    let mut out = vec![vec![GrElem::ZERO; n]; n];
    let mut d = vec![s; n];
    for i in (0..n).rev() {
        let best = pool.iter().enumerate().map(|(k, c)| (gr.valuation(&c[i]), k)).filter(|&(v, _)| v < s).min();
        let Some((v, idx)) = best else { continue };
        let mut piv = pool.swap_remove(idx);
        let uinv = gr.inv(&gr.div_p_pow(&piv[i], v)).expect("unit");
        for e in piv.iter_mut() {
            *e = gr.mul(e, &uinv);
        }
        for c in pool.iter_mut() {
            if c[i] == GrElem::ZERO {
                continue;
            }
            let f = gr.div_p_pow(&c[i], v);
            for (x, y) in c.iter_mut().zip(&piv) {
                *x = gr.sub(x, &gr.mul(&f, y));
            }
        }
        if v > 0 {
            pool.push(piv.iter().map(|e| gr.mul_p_pow(e, s - v)).collect());
        }
        pool.retain(|c| !zero(c));
        out[i] = piv;
        d[i] = v;
    }
    for j in 0..n {
        for i in (0..j).rev() {
            if d[i] >= s {
                continue;
            }
            let e = out[j][i];
            let rem = gr.truncate(&e, d[i]);
            if rem == e {
                continue;
            }
            let f = gr.div_p_pow(&gr.sub(&e, &rem), d[i]);
            let ci = out[i].clone();
            for (x, y) in out[j].iter_mut().zip(&ci) {
                *x = gr.sub(x, &gr.mul(&f, y));
            }
        }
    }
    (d, WittMatrix::from_cols(n, &out))
}

pub fn canonical_form(gr: &GaloisRing, u: &WittMatrix) -> Lattice {
    let (d, span) = hermite_form(gr, u);
    let ty = lattice_type(gr, &span);
    Lattice { span, ty, colength: d.iter().sum() }
}

/// Smith-form solution of U x = v, cross-checked against Cramer's rule.
pub fn membership_solve(gr: &GaloisRing, u: &WittMatrix, nr: u32, v: &[GrElem]) -> Result<Option<Vec<GrElem>>> {
    if !is_discriminant_basis(gr, u, nr)? {
        return Err(Error::NotABasis);
    }
    if v.len() != u.rows {
        return Err(Error::ParamsMismatch);
    }
    let s = gr.s();
    let delta = det(gr, u);
    let repl = replaced_determinants(gr, &u.columns(), v);
    let cramer = repl.iter().all(|d| gr.valuation(d) >= nr);
    let sm = smith_form(gr, u);
    let av = sm.a.mul_vec(gr, v);
    let mut y = Vec::with_capacity(v.len());
    for (x, &d) in av.iter().zip(&sm.diag) {
        if gr.valuation(x) < d {
            if cramer {
                return Err(Error::Inconsistent);
            }
            return Ok(None);
        }
        y.push(gr.div_p_pow(x, d));
    }
    if !cramer {
        return Err(Error::Inconsistent);
    }
    let x = sm.b.mul_vec(gr, &y);
    // Δ x_j = Δ_j; both sides divided by p^{nr} agree mod p^{s-nr}
    let unit = gr.div_p_pow(&delta, nr);
    for (xj, dj) in x.iter().zip(&repl) {
        let lhs = gr.truncate(&gr.mul(&unit, xj), s - nr);
        let rhs = gr.truncate(&gr.div_p_pow(dj, nr), s - nr);
        if lhs != rhs {
            return Err(Error::Inconsistent);
        }
    }
    Ok(Some(x))
}

/// All elements with digits at positions >= d equal to zero.
pub fn representatives_mod(gr: &GaloisRing, d: u32) -> Vec<GrElem> {
    let q = gr.field().q() as u64;
    let s = gr.s() as usize;
    let d = (d as usize).min(s);
    (0..q.pow(d as u32))
        .map(|mut code| {
            let mut digits = vec![0; s];
            for x in digits.iter_mut().take(d) {
                *x = (code % q) as Fe;
                code /= q;
            }
            gr.from_digits(&digits)
        })
        .collect()
}

pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Every submodule of W_s(F_q)^n of the given colength, in Hermite form.
pub fn enumerate_lattices(gr: &GaloisRing, n: usize, colength: u32) -> Result<Vec<Lattice>> {
    let q = gr.field().q() as u64;
    let s = gr.s();
    let states = q.checked_pow(n as u32 * s).unwrap_or(u64::MAX);
    if states > ENUMERATION_LIMIT {
        return Err(Error::SizeGuard(format!("q^(n*s) = {states} exceeds {ENUMERATION_LIMIT}")));
    }
    let pivots = crate::ore::pivot_vectors(n, s as usize, colength as usize);
    let mut out = Vec::new();
    for d in pivots {
        let d: Vec<u32> = d.into_iter().map(|x| x as u32).collect();
        let reps: Vec<Vec<GrElem>> = d.iter().map(|&di| representatives_mod(gr, di)).collect();
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|j| (0..j).map(move |i| (j, i))).filter(|&(j, _)| d[j] < s).collect();
        let total: u64 = slots.iter().map(|&(_, i)| reps[i].len() as u64).product();
        for mut code in 0..total {
            let mut m = WittMatrix::zero(n, n);
            for j in 0..n {
                if d[j] < s {
                    m.set(j, j, gr.p_pow(d[j]));
                }
            }
            for &(j, i) in &slots {
                let len = reps[i].len() as u64;
                m.set(i, j, reps[i][(code % len) as usize]);
                code /= len;
            }
            let (d2, canon) = hermite_form(gr, &m);
            if d2 == d && canon == m {
                let ty = lattice_type(gr, &m);
                out.push(Lattice { span: m, ty, colength });
            }
        }
    }
    out.sort();
    Ok(out)
}
