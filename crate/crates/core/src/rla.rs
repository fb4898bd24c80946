//! Restricted Lie algebras: Jacobson polynomials, a structure-constant model
//! of Lie(SL(n, W_J)), the β map, canonical weights, and the p-adic modular
//! action of the parabolic on the big cell.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Fe, Gf};
use crate::lattice::{det, WittMatrix};
use crate::linalg::{random_mat, row_space, Mat};
use crate::ring::Ring;
use crate::witt::{GaloisRing, GrElem};

const SUPPORTED: [u32; 4] = [2, 3, 5, 7];

/// c·[a_1,[a_2,…,[a_{p-1},x]…]] with `letters[k]` true for x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieWord {
    pub coeff: u32,
    pub letters: Vec<bool>,
}

impl LieWord {
    pub fn render(&self) -> String {
        let name = |b: bool| if b { "x" } else { "y" };
        let mut s = "x".to_string();
        for &l in self.letters.iter().rev() {
            s = format!("[{},{}]", name(l), s);
        }
        if self.coeff == 1 {
            s
        } else {
            format!("{}{}", self.coeff, s)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobsonTable {
    pub p: u32,
    /// polys[i-1] is s_i.
    pub polys: Vec<Vec<LieWord>>,
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("unit mod p")
}

/// Expands ad(Tx+y)^{p-1}(x) = Σ_i i·s_i(x,y) T^{i-1}.
pub fn jacobson_polynomials(p: u32) -> Result<JacobsonTable> {
    if !SUPPORTED.contains(&p) {
        return Err(Error::UnsupportedP(p));
    }
    let len = (p - 1) as usize;
    let mut polys = vec![Vec::new(); len];
    for code in 0..1u32 << len {
        let letters: Vec<bool> = (0..len).map(|k| code >> k & 1 == 1).collect();
        // [x,x] = 0
        if len > 0 && letters[len - 1] {
            continue;
        }
        let i = letters.iter().filter(|&&b| b).count() + 1;
        polys[i - 1].push(LieWord { coeff: inv_mod(i as u32 % p, p), letters });
    }
    Ok(JacobsonTable { p, polys })
}

impl JacobsonTable {
    /// Σ_i s_i(x, y) in any Lie algebra with the given bracket.
    pub fn eval_sum<E: Clone>(
        &self,
        x: &E,
        y: &E,
        bracket: &dyn Fn(&E, &E) -> E,
        scale: &dyn Fn(u32, &E) -> E,
        add: &dyn Fn(&E, &E) -> E,
        zero: E,
    ) -> E {
        let mut acc = zero;
        for poly in &self.polys {
            for w in poly {
                let mut t = x.clone();
                for &l in w.letters.iter().rev() {
                    t = bracket(if l { x } else { y }, &t);
                }
                acc = add(&acc, &scale(w.coeff, &t));
            }
        }
        acc
    }
}

fn mat_sub(gf: &Gf, a: &Mat, b: &Mat) -> Mat {
    a.add(gf, &b.scale(gf, gf.neg(1)))
}

fn mat_pow(gf: &Gf, a: &Mat, e: u32) -> Mat {
    (0..e).fold(Mat::identity(a.rows), |acc, _| acc.mul(gf, a))
}

fn commutator(gf: &Gf, a: &Mat, b: &Mat) -> Mat {
    mat_sub(gf, &a.mul(gf, b), &b.mul(gf, a))
}

/// (x+y)^p = x^p + y^p + Σ s_i(x,y) on random n×n matrices over `gf`.
pub fn restricted_check<R: Rng + ?Sized>(gf: &Gf, n: usize, trials: usize, rng: &mut R) -> Result<bool> {
    let p = gf.p();
    let table = jacobson_polynomials(p)?;
    for _ in 0..trials {
        let x = random_mat(gf, n, n, rng);
        let y = random_mat(gf, n, n, rng);
        let corr = table.eval_sum(
            &x,
            &y,
            &|a, b| commutator(gf, a, b),
            &|c, a| a.scale(gf, gf.from_int(c as i64)),
            &|a, b| a.add(gf, b),
            Mat::zero(n, n),
        );
        let lhs = mat_pow(gf, &x.add(gf, &y), p);
        let rhs = mat_pow(gf, &x, p).add(gf, &mat_pow(gf, &y, p)).add(gf, &corr);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    /// E_{i,i} - E_{i+1,i+1}
    H(usize),
    /// E_{a,b} at depth j
    X(usize, usize, usize),
    /// torus direction i at depth j ≥ 1
    Y(usize, usize),
}

impl Symbol {
    pub fn depth(&self) -> usize {
        match *self {
            Symbol::H(_) => 0,
            Symbol::X(_, _, j) | Symbol::Y(_, j) => j,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Symbol::H(i) => format!("h{}", i + 1),
            Symbol::X(a, b, j) => format!("X{}{}^{}", a + 1, b + 1, j),
            Symbol::Y(i, j) => format!("Y{}^{}", i + 1, j),
        }
    }
}

/// Sparse combination Σ coeff·basis[k], coefficients in F_p.
pub type Sparse = Vec<(u32, usize)>;

#[derive(Debug, Clone)]
pub struct StructureConstantAlgebra {
    pub p: u32,
    pub n: usize,
    pub depth: usize,
    pub basis: Vec<Symbol>,
    pub bracket: Vec<Vec<Sparse>>,
    pub pmap: Vec<Sparse>,
    pub weights: Vec<Vec<i64>>,
}

fn classical(n: usize, gf: &Gf, sym: Symbol) -> Mat {
    let mut m = Mat::zero(n, n);
    match sym {
        Symbol::H(i) => {
            m.set(i, i, 1);
            m.set(i + 1, i + 1, gf.neg(1));
        }
        Symbol::X(a, b, _) => m.set(a, b, 1),
        Symbol::Y(..) => {}
    }
    m
}

pub fn build_ws_model(n: usize, depth: usize, p: u32) -> Result<StructureConstantAlgebra> {
    if p == 2 {
        return Err(Error::UnsupportedP(2));
    }
    if !SUPPORTED.contains(&p) {
        return Err(Error::UnsupportedP(p));
    }
    if n < 2 || depth == 0 {
        return Err(Error::DomainError(format!("need n ≥ 2 and depth ≥ 1, got n={n}, depth={depth}")));
    }
    let gf = Gf::prime(p)?;
    let mut basis: Vec<Symbol> = (0..n - 1).map(Symbol::H).collect();
    for j in 0..depth {
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    basis.push(Symbol::X(a, b, j));
                }
            }
        }
        if j > 0 {
            basis.extend((0..n - 1).map(|i| Symbol::Y(i, j)));
        }
    }
    let index = |s: Symbol| basis.iter().position(|&b| b == s).expect("basis symbol");
    let sigma = |m: &Mat| -> Sparse {
        let mut out = Vec::new();
        let mut t = 0;
        for i in 0..n - 1 {
            t = gf.add(t, m.get(i, i));
            if t != 0 {
                out.push((t, index(Symbol::H(i))));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && m.get(a, b) != 0 {
                    out.push((m.get(a, b), index(Symbol::X(a, b, 0))));
                }
            }
        }
        out.sort_by_key(|&(_, k)| k);
        out
    };
    let dim = basis.len();
    let mut bracket = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if basis[i].depth() == 0 && basis[j].depth() == 0 {
                let c = commutator(&gf, &classical(n, &gf, basis[i]), &classical(n, &gf, basis[j]));
                bracket[i][j] = sigma(&c);
            }
        }
    }
    let pmap = basis
        .iter()
        .map(|&s| match s {
            Symbol::H(_) => vec![(1, index(s))],
            Symbol::X(a, b, j) if j + 1 < depth => vec![(1, index(Symbol::X(a, b, j + 1)))],
            Symbol::Y(i, j) if j + 1 < depth => vec![(1, index(Symbol::Y(i, j + 1)))],
            _ => Vec::new(),
        })
        .collect();
    let weights = basis
        .iter()
        .map(|&s| {
            let mut w = vec![0i64; n];
            if let Symbol::X(a, b, j) = s {
                let scale = (p as i64).pow(j as u32);
                w[a] += scale;
                w[b] -= scale;
            }
            w
        })
        .collect();
    Ok(StructureConstantAlgebra { p, n, depth, basis, bracket, pmap, weights })
}

impl StructureConstantAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dense(&self, gf: &Gf, s: &Sparse) -> Vec<Fe> {
        let mut v = vec![0; self.dim()];
        for &(c, k) in s {
            v[k] = gf.add(v[k], gf.from_int(c as i64));
        }
        v
    }

    pub fn unit(&self, k: usize) -> Vec<Fe> {
        let mut v = vec![0; self.dim()];
        v[k] = 1;
        v
    }

    pub fn lie(&self, gf: &Gf, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
        let mut out = vec![0; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = gf.mul(a, b);
                for &(c, k) in &self.bracket[i][j] {
                    out[k] = gf.add(out[k], gf.mul(ab, gf.from_int(c as i64)));
                }
            }
        }
        out
    }

    /// x^{[p]} from the basis table, extended by Jacobson's formula one
    /// basis term at a time.
    pub fn p_power(&self, gf: &Gf, x: &[Fe], order: &[usize]) -> Result<Vec<Fe>> {
        let table = jacobson_polynomials(self.p)?;
        let dim = self.dim();
        let add = |a: &Vec<Fe>, b: &Vec<Fe>| a.iter().zip(b).map(|(&u, &v)| gf.add(u, v)).collect::<Vec<Fe>>();
        let mut acc = vec![0; dim];
        let mut pw = vec![0; dim];
        for &k in order {
            if x[k] == 0 {
                continue;
            }
            let mut term = vec![0; dim];
            term[k] = x[k];
            let cp = gf.pow(x[k], self.p as u64);
            for &(c, t) in &self.pmap[k] {
                pw[t] = gf.add(pw[t], gf.mul(cp, gf.from_int(c as i64)));
            }
            let corr = table.eval_sum(
                &acc,
                &term,
                &|a, b| self.lie(gf, a, b),
                &|c, a| a.iter().map(|&v| gf.mul(gf.from_int(c as i64), v)).collect(),
                &add,
                vec![0; dim],
            );
            pw = add(&pw, &corr);
            acc = add(&acc, &term);
        }
        Ok(pw)
    }

    pub fn p_power_default(&self, gf: &Gf, x: &[Fe]) -> Result<Vec<Fe>> {
        let order: Vec<usize> = (0..self.dim()).collect();
        self.p_power(gf, x, &order)
    }

    /// Whether the depth-0 span is closed under the basis [p]-table.
    pub fn depth0_p_closed(&self) -> bool {
        (0..self.dim())
            .filter(|&k| self.basis[k].depth() == 0)
            .all(|k| self.pmap[k].iter().all(|&(_, t)| self.basis[t].depth() == 0))
    }

    pub fn audit(&self, gf: &Gf) -> ModelAudit {
        let dim = self.dim();
        let neg = |v: &Vec<Fe>| v.iter().map(|&a| gf.neg(a)).collect::<Vec<Fe>>();
        let units: Vec<Vec<Fe>> = (0..dim).map(|k| self.unit(k)).collect();
        let mut antisymmetric = true;
        for i in 0..dim {
            for j in 0..dim {
                antisymmetric &= self.lie(gf, &units[i], &units[j]) == neg(&self.lie(gf, &units[j], &units[i]));
            }
        }
        let mut jacobi = true;
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.lie(gf, &units[i], &units[j]);
                for k in 0..dim {
                    let a = self.lie(gf, &ij, &units[k]);
                    let b = self.lie(gf, &self.lie(gf, &units[j], &units[k]), &units[i]);
                    let c = self.lie(gf, &self.lie(gf, &units[k], &units[i]), &units[j]);
                    jacobi &= a.iter().zip(&b).zip(&c).all(|((&x, &y), &z)| gf.add(gf.add(x, y), z) == 0);
                }
            }
        }
        let mut weights = true;
        for i in 0..dim {
            for j in 0..dim {
                let target: Vec<i64> = self.weights[i].iter().zip(&self.weights[j]).map(|(a, b)| a + b).collect();
                weights &= self.bracket[i][j].iter().all(|&(_, k)| self.weights[k] == target);
            }
            let scaled: Vec<i64> = self.weights[i].iter().map(|&w| w * self.p as i64).collect();
            weights &= self.pmap[i].iter().all(|&(_, k)| self.weights[k] == scaled);
        }
        // ad(b^{[p]}) = ad(b)^p
        let mut adjoint = true;
        for i in 0..dim {
            let bp = self.dense(gf, &self.pmap[i]);
            for j in 0..dim {
                let lhs = self.lie(gf, &bp, &units[j]);
                let mut rhs = units[j].clone();
                for _ in 0..self.p {
                    rhs = self.lie(gf, &units[i], &rhs);
                }
                adjoint &= lhs == rhs;
            }
        }
        ModelAudit { antisymmetric, jacobi, weights, adjoint }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelAudit {
    pub antisymmetric: bool,
    pub jacobi: bool,
    pub weights: bool,
    pub adjoint: bool,
}

impl ModelAudit {
    pub fn passed(&self) -> bool {
        self.antisymmetric && self.jacobi && self.weights && self.adjoint
    }
}

/// β(x) = x^{[p]} − σ(x_cl^p) for x supported in depth 0.
pub fn beta_map(model: &StructureConstantAlgebra, gf: &Gf, x: &[Fe]) -> Result<Vec<Fe>> {
    if gf.p() != model.p {
        return Err(Error::ParamsMismatch);
    }
    if x.len() != model.dim() {
        return Err(Error::Shape(format!("element of length {} in dimension {}", x.len(), model.dim())));
    }
    if x.iter().zip(&model.basis).any(|(&c, s)| c != 0 && s.depth() > 0) {
        return Err(Error::DomainError("β needs a depth-0 element".into()));
    }
    let n = model.n;
    let mut cl = Mat::zero(n, n);
    for (&c, &s) in x.iter().zip(&model.basis) {
        if c != 0 {
            cl = cl.add(gf, &classical(n, gf, s).scale(gf, c));
        }
    }
    let pw = mat_pow(gf, &cl, model.p);
    let mut sigma = vec![0; model.dim()];
    let mut t = 0;
    for i in 0..n - 1 {
        t = gf.add(t, pw.get(i, i));
        sigma[i] = t;
    }
    for (k, &s) in model.basis.iter().enumerate() {
        if let Symbol::X(a, b, 0) = s {
            sigma[k] = pw.get(a, b);
        }
    }
    let mp = model.p_power_default(gf, x)?;
    Ok(mp.iter().zip(&sigma).map(|(&a, &b)| gf.sub(a, b)).collect())
}

/// Rank of β on the X^{(0)}-span equals the number of roots.
pub fn beta_injective_on_roots(model: &StructureConstantAlgebra, gf: &Gf) -> Result<bool> {
    let mut images = Vec::new();
    let mut roots = 0;
    for (k, s) in model.basis.iter().enumerate() {
        if let Symbol::X(_, _, 0) = s {
            roots += 1;
            images.push(beta_map(model, gf, &model.unit(k))?);
        }
    }
    Ok(row_space(gf, &images, model.dim()).len() == roots)
}

/// Multiple of λ_1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Character(pub i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightVariant {
    Mixed,
    EqualChar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalWeight {
    pub character: Character,
    pub filtration: Vec<i64>,
}

pub fn canonical_weight(n: u32, r: u32, p: u32, variant: WeightVariant) -> Result<CanonicalWeight> {
    if n < 2 || r < 1 {
        return Err(Error::DomainError(format!("need n ≥ 2, r ≥ 1, got n={n}, r={r}")));
    }
    let overflow = || Error::OverflowGuard(format!("p^(nr) for p={p}, n={n}, r={r}"));
    let (n, p) = (n as i64, p as i64);
    match variant {
        WeightVariant::EqualChar => Ok(CanonicalWeight { character: Character(-n), filtration: vec![-n] }),
        WeightVariant::Mixed => {
            let nr = (n as u32).checked_mul(r).ok_or_else(overflow)?;
            let top = p.checked_pow(nr).ok_or_else(overflow)?;
            let closed = -n * ((top - 1) / (p - 1));
            let filtration: Vec<i64> = (0..nr).map(|j| -n * p.pow(j)).collect();
            if filtration.iter().sum::<i64>() != closed {
                return Err(Error::Inconsistent);
            }
            Ok(CanonicalWeight { character: Character(closed), filtration })
        }
    }
}

/// Both variants; they must differ once nr > 1.
pub fn canonical_weights(n: u32, r: u32, p: u32) -> Result<(CanonicalWeight, CanonicalWeight)> {
    let mixed = canonical_weight(n, r, p, WeightVariant::Mixed)?;
    let equal = canonical_weight(n, r, p, WeightVariant::EqualChar)?;
    if n * r > 1 && mixed.character == equal.character {
        return Err(Error::Inconsistent);
    }
    Ok((mixed, equal))
}

fn block(x: &WittMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> WittMatrix {
    let mut out = WittMatrix::zero(rows.len(), cols.len());
    for (i, r) in rows.clone().enumerate() {
        for (j, c) in cols.clone().enumerate() {
            out.set(i, j, x.get(r, c));
        }
    }
    out
}

fn row_times(gr: &GaloisRing, u: &[GrElem], m: &WittMatrix) -> Vec<GrElem> {
    (0..m.cols)
        .map(|j| u.iter().enumerate().fold(gr.zero(), |acc, (i, a)| gr.add(&acc, &gr.mul(a, &m.get(i, j)))))
        .collect()
}

fn check_parabolic(gr: &GaloisRing, x: &WittMatrix) -> Result<()> {
    if x.rows != x.cols || x.rows < 2 {
        return Err(Error::Shape(format!("{}x{}", x.rows, x.cols)));
    }
    if (1..x.cols).any(|j| gr.is_unit(&x.get(0, j))) {
        return Err(Error::NotInParabolic);
    }
    Ok(())
}

/// X = [[1, X12·X22^{-1}], [0, I]] · [[x11 − X12·X22^{-1}·X21, 0], [X21, X22]].
pub fn parabolic_factor(gr: &GaloisRing, x: &WittMatrix) -> Result<(WittMatrix, WittMatrix)> {
    check_parabolic(gr, x)?;
    let n = x.rows;
    let x12: Vec<GrElem> = (1..n).map(|j| x.get(0, j)).collect();
    let x21 = block(x, 1..n, 0..1);
    let x22 = block(x, 1..n, 1..n);
    let inv = x22.inverse(gr).map_err(|_| Error::BlockSingular)?;
    let a = row_times(gr, &x12, &inv);
    let corr = row_times(gr, &a, &x21)[0];
    let mut unip = WittMatrix::identity(gr, n);
    let mut lower = x.clone();
    for j in 1..n {
        unip.set(0, j, a[j - 1]);
        lower.set(0, j, gr.zero());
    }
    lower.set(0, 0, gr.sub(&x.get(0, 0), &corr));
    Ok((unip, lower))
}

/// X·u = (x11·u + X12)(X21·u + X22)^{-1} for u a row over pW.
pub fn modular_action(gr: &GaloisRing, x: &WittMatrix, u: &[GrElem]) -> Result<Vec<GrElem>> {
    check_parabolic(gr, x)?;
    let n = x.rows;
    if u.len() != n - 1 {
        return Err(Error::Shape(format!("row of length {} for n={n}", u.len())));
    }
    if u.iter().any(|a| gr.is_unit(a)) {
        return Err(Error::DomainError("u must have entries in pW".into()));
    }
    let x11 = x.get(0, 0);
    let num: Vec<GrElem> = (1..n).map(|j| gr.add(&gr.mul(&x11, &u[j - 1]), &x.get(0, j))).collect();
    let mut den = block(x, 1..n, 1..n);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let v = gr.add(&den.get(i, j), &gr.mul(&x.get(i + 1, 0), &u[j]));
            den.set(i, j, v);
        }
    }
    let inv = den.inverse(gr).map_err(|_| Error::BlockSingular)?;
    Ok(row_times(gr, &num, &inv))
}

/// Random element of the parabolic with invertible lower block.
pub fn random_parabolic<R: Rng + ?Sized>(gr: &GaloisRing, n: usize, rng: &mut R) -> WittMatrix {
    let mut x = WittMatrix::random(gr, n, n, rng);
    let x22 = WittMatrix::random_invertible(gr, n - 1, rng);
    for i in 1..n {
        for j in 1..n {
            x.set(i, j, x22.get(i - 1, j - 1));
        }
    }
    for j in 1..n {
        let v = gr.mul_p_pow(&x.get(0, j), 1);
        x.set(0, j, v);
    }
    x.set(0, 0, gr.random_unit(rng));
    x
}

/// Over every invertible X in the parabolic with invertible lower block: whether
/// X·0 = 0 exactly when the first row is (a, 0, …, 0). Returns the
/// stabilizer size and the verdict.
pub fn stabilizer_of_zero_sweep(gr: &GaloisRing, n: usize, limit: usize) -> Result<(usize, bool)> {
    let elems = gr.elements();
    let total = elems.len().checked_pow((n * n) as u32).filter(|&t| t <= limit).ok_or_else(|| {
        Error::SizeGuard(format!("{}^{} matrices exceed {limit}", elems.len(), n * n))
    })?;
    let zero = vec![gr.zero(); n - 1];
    let mut count = 0;
    let mut agree = true;
    for mut code in 0..total {
        let mut x = WittMatrix::zero(n, n);
        for k in 0..n * n {
            x.set(k % n, k / n, elems[code % elems.len()]);
            code /= elems.len();
        }
        if !gr.is_unit(&det(gr, &x)) {
            continue;
        }
        let action = match modular_action(gr, &x, &zero) {
            Ok(v) => v,
            Err(Error::NotInParabolic) | Err(Error::BlockSingular) => continue,
            Err(e) => return Err(e),
        };
        let fixes = action == zero;
        let shape = (1..n).all(|j| x.get(0, j) == gr.zero());
        agree &= fixes == shape;
        if fixes {
            count += 1;
        }
    }
    Ok((count, agree))
}
