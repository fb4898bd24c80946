//! Open-cell sampling, the complete-intersection Jacobian and explicit
//! one-parameter deformation families.

use rand::Rng;

use super::{det, det_generic, is_discriminant_basis, lattice_type, membership_solve, WittMatrix};
use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::linalg::Mat;
use crate::ring::{Dual, FqAlgebra, PolyRing, Ring};
use crate::witt::{GaloisRing, WittGeneric};

fn minor(u: &WittMatrix, row: usize, col: usize) -> WittMatrix {
    let cols: Vec<Vec<_>> = (0..u.cols)
        .filter(|&j| j != col)
        .map(|j| u.col(j).iter().enumerate().filter(|&(i, _)| i != row).map(|(_, x)| *x).collect())
        .collect();
    WittMatrix::from_cols(u.rows - 1, &cols)
}

/// Random point of D(γ_0) on the scheme of bases of discriminant nr, s = nr + 1.
pub fn sample_open_cell<R: Rng + ?Sized>(gr: &GaloisRing, n: usize, nr: u32, rng: &mut R) -> Result<WittMatrix> {
    if gr.s() != nr + 1 {
        return Err(Error::PrecisionError(format!("open cell needs s = nr + 1 = {}, got {}", nr + 1, gr.s())));
    }
    if n == 0 {
        return Err(Error::Shape("n must be positive".into()));
    }
    let gf = gr.field();
    for _ in 0..1000 {
        let mut u = WittMatrix::random(gr, n, n, rng);
        let gamma = if n == 1 { gr.one() } else { det(gr, &minor(&u, 0, 0)) };
        if !gr.is_unit(&gamma) {
            continue;
        }
        let t = gf.random_nonzero(rng);
        let mut digits = vec![0; gr.s() as usize];
        digits[nr as usize] = t;
        let mut acc = gr.from_digits(&digits);
        for j in 1..n {
            let term = gr.mul(&u.get(0, j), &det(gr, &minor(&u, 0, j)));
            acc = if j % 2 == 1 { gr.add(&acc, &term) } else { gr.sub(&acc, &term) };
        }
        u.set(0, 0, gr.mul(&gr.inv(&gamma)?, &acc));
        debug_assert!(is_discriminant_basis(gr, &u, nr).unwrap());
        return Ok(u);
    }
    Err(Error::Singular)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteIntersectionReport {
    pub ambient_dim: usize,
    pub variety_dim: usize,
    pub ranks: Vec<usize>,
}

/// Rank of d(δ_0, .., δ_{nr-1}) with respect to all digit coordinates at U.
pub fn jacobian_rank(gr: &GaloisRing, u: &WittMatrix, nr: u32) -> Result<usize> {
    let n = u.rows;
    let s = gr.s() as usize;
    let w = WittGeneric::new(Dual { gf: gr.field().clone() }, gr.p() as u32, s)?;
    let base: Vec<Vec<Vec<(Fe, Fe)>>> = (0..n)
        .map(|j| u.col(j).iter().map(|g| gr.to_digits(g).into_iter().map(|d| (d, 0)).collect()).collect())
        .collect();
    let mut jac = Mat::zero(nr as usize, n * n * s);
    let mut c = 0;
    for j in 0..n {
        for i in 0..n {
            for k in 0..s {
                let mut cols = base.clone();
                cols[j][i][k].1 = 1;
                let d = det_generic(&w, &cols);
                for (r, digit) in d.iter().take(nr as usize).enumerate() {
                    jac.set(r, c, digit.1);
                }
                c += 1;
            }
        }
    }
    Ok(jac.rank(gr.field()))
}

pub fn verify_complete_intersection<R: Rng + ?Sized>(
    gr: &GaloisRing,
    n: usize,
    nr: u32,
    trials: usize,
    rng: &mut R,
) -> Result<CompleteIntersectionReport> {
    let ambient_dim = n * n * (nr as usize + 1);
    let mut ranks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let u = sample_open_cell(gr, n, nr, rng)?;
        let rank = jacobian_rank(gr, &u, nr)?;
        if rank != nr as usize {
            return Err(Error::RankDeficit(format!("rank {rank} at {:?}", u.to_digit_cols(gr))));
        }
        ranks.push(rank);
    }
    Ok(CompleteIntersectionReport { ambient_dim, variety_dim: ambient_dim - nr as usize, ranks })
}

/// Matrix over W_s(F_q[t]); each entry is a list of s digit polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricFamily {
    pub n: usize,
    pub s: usize,
    /// Column-major.
    pub entries: Vec<Vec<Vec<Fe>>>,
    pub generic_type: Vec<u32>,
    pub special_type: Vec<u32>,
}

impl ParametricFamily {
    fn new(n: usize, s: usize) -> ParametricFamily {
        ParametricFamily {
            n,
            s,
            entries: vec![vec![Vec::new(); s]; n * n],
            generic_type: Vec::new(),
            special_type: Vec::new(),
        }
    }

    /// Sets entry (i, j) to ξ-monomial p^e.
    fn set_power(&mut self, i: usize, j: usize, e: u32) {
        if (e as usize) < self.s {
            self.entries[j * self.n + i][e as usize] = vec![1];
        }
    }

    /// Sets digit e of entry (i, j) to `poly`.
    fn set_digit(&mut self, i: usize, j: usize, e: u32, poly: Vec<Fe>) {
        if (e as usize) < self.s {
            self.entries[j * self.n + i][e as usize] = poly;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &[Vec<Fe>] {
        &self.entries[j * self.n + i]
    }

    pub fn at(&self, gr: &GaloisRing, t: Fe) -> WittMatrix {
        let poly = PolyRing { gf: gr.field().clone() };
        let cols: Vec<Vec<_>> = (0..self.n)
            .map(|j| {
                (0..self.n)
                    .map(|i| {
                        let d: Vec<Fe> = self.get(i, j).iter().map(|c| poly.eval(c, t)).collect();
                        gr.from_digits(&d)
                    })
                    .collect()
            })
            .collect();
        WittMatrix::from_cols(self.n, &cols)
    }

    pub fn fiber_type(&self, gr: &GaloisRing, t: Fe) -> Vec<u32> {
        lattice_type(gr, &self.at(gr, t))
    }

    /// Special type at t = 0 and generic type at every t != 0.
    pub fn verify_fibers(&self, gr: &GaloisRing) -> bool {
        gr.field().elements().all(|t| {
            let want = if t == 0 { &self.special_type } else { &self.generic_type };
            self.fiber_type(gr, t) == *want
        })
    }
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Family of generic type g degenerating at t = 0 to g with one box moved
/// from part i to part j: column j is p^{r_j}e_j + ξ(t)p^{r_j-1}e_i.
pub fn specialization_path(p: u32, from: &[u32], i: usize, j: usize, s: usize) -> Result<ParametricFamily> {
    let n = from.len();
    if i >= n || j >= n || from[i] < from[j] + 2 {
        return Err(Error::HypothesisViolated(format!("need g_i >= g_j + 2 at ({i}, {j}) in {from:?}")));
    }
    if from.iter().any(|&g| g as usize >= s) {
        return Err(Error::TruncationTooShort(format!("s = {s} does not see {from:?}")));
    }
    let mut r = from.to_vec();
    r[i] -= 1;
    r[j] += 1;
    let mut fam = ParametricFamily::new(n, s);
    for (k, &rk) in r.iter().enumerate() {
        fam.set_power(k, k, rk);
    }
    let e = r[j] - 1;
    let mut tp = vec![0; (p as usize).pow(e) + 1];
    *tp.last_mut().unwrap() = 1;
    fam.set_digit(i, j, e, tp);
    fam.generic_type = sorted_desc(from.to_vec());
    fam.special_type = sorted_desc(r);
    Ok(fam)
}

/// One edge of the degeneration graph on types of colength nr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationEdge {
    pub from: Vec<u32>,
    pub to: Vec<u32>,
    pub verified: bool,
}

/// Breadth-first closure of single-box moves starting at {nr, 0, .., 0}.
pub fn specialization_chain(gr: &GaloisRing, n: usize, nr: u32) -> Result<(Vec<Vec<u32>>, Vec<SpecializationEdge>)> {
    let s = gr.s() as usize;
    let mut top = vec![0; n];
    top[0] = nr;
    let mut seen = vec![top.clone()];
    let mut edges = Vec::new();
    let mut k = 0;
    while k < seen.len() {
        let g = seen[k].clone();
        k += 1;
        for i in 0..n {
            for j in 0..n {
                if i == j || g[i] < g[j] + 2 {
                    continue;
                }
                let fam = specialization_path(gr.p() as u32, &g, i, j, s)?;
                let verified = fam.verify_fibers(gr);
                let to = fam.special_type.clone();
                if !edges.iter().any(|e: &SpecializationEdge| e.from == g && e.to == to) {
                    edges.push(SpecializationEdge { from: g.clone(), to: to.clone(), verified });
                }
                if !seen.contains(&to) {
                    seen.push(to);
                }
            }
        }
    }
    seen.sort_unstable_by(|a, b| b.cmp(a));
    Ok((seen, edges))
}

/// One-parameter deformation moving a box from α_s to α_q: M_q = p^{α_q+1}e_q, M_s = ξ(t)^{p^{-α_q}}p^{α_q}e_q + p^{α_s-1}e_s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtFamily {
    pub family: ParametricFamily,
    pub alpha: Vec<u32>,
    pub q_index: usize,
    pub s_index: usize,
}

/// `alpha` nondecreasing with α_q < r < α_s, r = Σα / n; truncation s = nr + 1.
pub fn mt_family(alpha: &[u32], q_index: usize, s_index: usize) -> Result<MtFamily> {
    let n = alpha.len();
    let nr: u32 = alpha.iter().sum();
    if n == 0 || nr % n as u32 != 0 || alpha.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::HypothesisViolated(format!("{alpha:?} is not a nondecreasing type of colength nr")));
    }
    let r = nr / n as u32;
    if q_index >= n || s_index >= n || q_index == s_index || alpha[q_index] >= r || alpha[s_index] <= r {
        return Err(Error::HypothesisViolated(format!("need α_q < {r} < α_s at ({q_index}, {s_index})")));
    }
    let s = nr as usize + 1;
    let mut fam = ParametricFamily::new(n, s);
    for (k, &a) in alpha.iter().enumerate() {
        if k != q_index && k != s_index {
            fam.set_power(k, k, a);
        }
    }
    let (aq, as_) = (alpha[q_index], alpha[s_index]);
    fam.set_power(q_index, q_index, aq + 1);
    fam.set_digit(q_index, s_index, aq, vec![0, 1]);
    fam.set_power(s_index, s_index, as_ - 1);
    fam.generic_type = sorted_desc(alpha.to_vec());
    let mut sp = alpha.to_vec();
    sp[q_index] += 1;
    sp[s_index] -= 1;
    fam.special_type = sorted_desc(sp);
    Ok(MtFamily { family: fam, alpha: alpha.to_vec(), q_index, s_index })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtRelation {
    /// y_{q,α_q} - t·y_{s,α_s-1}^p
    Stated,
    /// y_{q,α_q} - t·y_{s,α_s-1}
    DropFrobenius,
    /// y_{q,α_q}^{p^{α_s-α_q}} - t^{p^{α_s-α_q}}·y_{s,α_s-1}^p
    Corrected,
}

/// Evaluates the relation on y = M(t)x computed over W_s(F_q[t]) at random x and t.
pub fn verify_mt_relation<R: Rng + ?Sized>(
    gr: &GaloisRing,
    fam: &MtFamily,
    samples: usize,
    relation: MtRelation,
    rng: &mut R,
) -> Result<bool> {
    let gf = gr.field();
    let f = &fam.family;
    let p = gf.p();
    let poly = PolyRing { gf: gf.clone() };
    let w = WittGeneric::new(poly.clone(), p, f.s)?;
    let (qi, si) = (fam.q_index, fam.s_index);
    let (aq, as_) = (fam.alpha[qi] as usize, fam.alpha[si] as usize);
    let delta = (as_ - aq) as u32;
    for _ in 0..samples {
        let x: Vec<Vec<Vec<Fe>>> = (0..f.n).map(|_| (0..f.s).map(|_| poly.scalar(gf.random(rng))).collect()).collect();
        let row = |i: usize| -> Vec<Vec<Fe>> {
            (0..f.n).fold(w.zero(), |acc, j| w.add(&acc, &w.mul(&f.get(i, j).to_vec(), &x[j])))
        };
        let yq = row(qi)[aq].clone();
        let ys = row(si)[as_ - 1].clone();
        let t = gf.random(rng);
        let (a, b) = (poly.eval(&yq, t), poly.eval(&ys, t));
        let value = match relation {
            MtRelation::Stated => gf.sub(a, gf.mul(t, gf.pow(b, p as u64))),
            MtRelation::DropFrobenius => gf.sub(a, gf.mul(t, b)),
            MtRelation::Corrected => {
                let e = (p as u64).pow(delta);
                gf.sub(gf.pow(a, e), gf.mul(gf.pow(t, e), gf.pow(b, p as u64)))
            }
        };
        if value != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// g with U·g = V, recovered column by column; None if some column of V is outside span(U).
pub fn recover_transition(gr: &GaloisRing, u: &WittMatrix, v: &WittMatrix, nr: u32) -> Result<Option<WittMatrix>> {
    let mut cols = Vec::with_capacity(v.cols);
    for j in 0..v.cols {
        match membership_solve(gr, u, nr, v.col(j))? {
            Some(x) => cols.push(x),
            None => return Ok(None),
        }
    }
    let g = WittMatrix::from_cols(u.cols, &cols);
    if u.mul(gr, &g) != *v {
        return Err(Error::Inconsistent);
    }
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Gf;
    use crate::lattice::canonical_form;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gr(p: u32, m: u32, s: u32) -> GaloisRing {
        GaloisRing::new(&Gf::new(p, m).unwrap(), s).unwrap()
    }

    #[test]
    fn open_cell_points_are_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, n, nr) in [(2, 2, 2), (3, 2, 2), (2, 3, 3), (5, 1, 2)] {
            let g = gr(p, 1, nr + 1);
            for _ in 0..100 {
                let u = sample_open_cell(&g, n, nr, &mut rng).unwrap();
                assert!(is_discriminant_basis(&g, &u, nr).unwrap());
            }
        }
        let g = gr(2, 2, 3);
        let u = sample_open_cell(&g, 1, 2, &mut rng).unwrap();
        let d = g.to_digits(&u.get(0, 0));
        assert_eq!(&d[..2], &[0, 0]);
        assert_ne!(d[2], 0);
    }

    #[test]
    fn complete_intersection_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rep = verify_complete_intersection(&gr(2, 1, 3), 2, 2, 20, &mut rng).unwrap();
        assert_eq!((rep.ambient_dim, rep.variety_dim), (12, 10));
        let rep = verify_complete_intersection(&gr(3, 1, 1), 2, 0, 5, &mut rng).unwrap();
        assert!(rep.ranks.iter().all(|&r| r == 0));
    }

    #[test]
    fn specialization_and_constant_families() {
        let g = gr(2, 2, 5);
        let fam = specialization_path(2, &[4, 0], 0, 1, 5).unwrap();
        assert_eq!(fam.special_type, vec![3, 1]);
        assert!(fam.verify_fibers(&g));
        let (types, edges) = specialization_chain(&g, 2, 4).unwrap();
        assert_eq!(types, vec![vec![4, 0], vec![3, 1], vec![2, 2]]);
        assert!(edges.iter().all(|e| e.verified));
        let mut constant = ParametricFamily::new(2, 5);
        constant.set_power(0, 0, 3);
        constant.set_power(1, 1, 1);
        assert!(g.field().elements().all(|t| constant.fiber_type(&g, t) == vec![3, 1]));
        assert!(specialization_path(2, &[3, 2], 0, 1, 6).is_err());
    }

    #[test]
    fn box_moving_family() {
        let g = gr(2, 2, 5);
        let mt = mt_family(&[1, 3], 0, 1).unwrap();
        assert_eq!(mt.family.fiber_type(&g, 0), vec![2, 2]);
        assert!(g.field().elements().skip(1).all(|t| mt.family.fiber_type(&g, t) == vec![3, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        assert!(verify_mt_relation(&g, &mt, 50, MtRelation::Stated, &mut rng).unwrap());
        assert!(verify_mt_relation(&g, &mt, 50, MtRelation::Corrected, &mut rng).unwrap());
        assert!(!verify_mt_relation(&g, &mt, 50, MtRelation::DropFrobenius, &mut rng).unwrap());
        let g8 = gr(2, 3, 5);
        assert!(verify_mt_relation(&g8, &mt, 50, MtRelation::Corrected, &mut rng).unwrap());
        assert!(!verify_mt_relation(&g8, &mt, 50, MtRelation::Stated, &mut rng).unwrap());
        assert!(mt_family(&[2, 2], 0, 1).is_err());
    }

    #[test]
    fn transition_matrices() {
        let g = gr(3, 1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u = sample_open_cell(&g, 2, 2, &mut rng).unwrap();
            let h = WittMatrix::random_invertible(&g, 2, &mut rng);
            let v = u.mul(&g, &h);
            let t = recover_transition(&g, &u, &v, 2).unwrap().unwrap();
            assert!(g.is_unit(&det(&g, &t)));
            let w = sample_open_cell(&g, 2, 2, &mut rng).unwrap();
            let same = canonical_form(&g, &u) == canonical_form(&g, &w);
            assert_eq!(recover_transition(&g, &u, &w, 2).unwrap().is_some(), same);
        }
    }
}
