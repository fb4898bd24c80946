//! p-linear maps on V = k^n under the twisted row action v ↦ v^{[p]}B, and
//! their correspondence with θ̄-closed subspaces of O̅⊗V transversal to V,
//! where O̅ = O/θ^n.
//!
//! Elements of O̅⊗V are stored in left coordinates: index s·n + i holds a
//! with a·θ^s⊗e_i. Since θa = a^pθ, the element θ^s⊗v has grade-s
//! coordinates v^{[p^s]}.

use crate::error::{Error, Result};
use crate::gf::{solve_semilinear, Fe, Gf, SemilinearEquation, SemilinearTerm};
use crate::linalg::{all_matrices, row_space, Mat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLinearMap {
    pub b: Mat,
}

impl PLinearMap {
    pub fn new(b: Mat) -> Result<PLinearMap> {
        if b.rows != b.cols {
            return Err(Error::Shape(format!("{}x{} is not square", b.rows, b.cols)));
        }
        Ok(PLinearMap { b })
    }

    pub fn zero(n: usize) -> PLinearMap {
        PLinearMap { b: Mat::zero(n, n) }
    }

    pub fn n(&self) -> usize {
        self.b.rows
    }

    pub fn apply(&self, gf: &Gf, v: &[Fe]) -> Vec<Fe> {
        twisted_apply(gf, v, &self.b, 1)
    }
}

/// v ↦ v^{[p^r]} B^{[p^{r-1}]} ⋯ B.
pub fn twisted_apply(gf: &Gf, v: &[Fe], b: &Mat, r: usize) -> Vec<Fe> {
    let mut out = v.to_vec();
    for _ in 0..r {
        let f: Vec<Fe> = out.iter().map(|&a| gf.frob(a, 1)).collect();
        out = b.vec_mul(gf, &f);
    }
    out
}

/// B_r = B^{[p^{r-1}]} ⋯ B^{[p]} B, with B_0 = I, so that φ^r(v) = v^{[p^r]}B_r.
pub fn power_matrix(gf: &Gf, b: &Mat, r: usize) -> Mat {
    let mut acc = Mat::identity(b.rows);
    for _ in 0..r {
        acc = acc.frob(gf, 1).mul(gf, b);
    }
    acc
}

pub fn is_p_nilpotent(gf: &Gf, phi: &PLinearMap) -> bool {
    power_matrix(gf, &phi.b, phi.n()).is_zero()
}

/// All p-nilpotent n×n matrices over `gf` (exhaustive).
pub fn all_p_nilpotents(gf: &Gf, n: usize, limit: u64) -> Result<Vec<PLinearMap>> {
    guard(gf, (n * n) as u32, limit)?;
    Ok(all_matrices(gf, n, n).map(|b| PLinearMap { b }).filter(|f| is_p_nilpotent(gf, f)).collect())
}

fn guard(gf: &Gf, exp: u32, limit: u64) -> Result<u64> {
    (gf.q() as u64)
        .checked_pow(exp)
        .filter(|&t| t <= limit)
        .ok_or_else(|| Error::SizeGuard(format!("{}^{exp} exceeds {limit}", gf.q())))
}

/// Multiplication by θ̄ in left coordinates.
pub fn theta_apply(gf: &Gf, n: usize, x: &[Fe]) -> Vec<Fe> {
    let mut out = vec![0; n * n];
    for s in 0..n.saturating_sub(1) {
        for i in 0..n {
            out[(s + 1) * n + i] = gf.frob(x[s * n + i], 1);
        }
    }
    out
}

/// Left coordinates of θ^t⊗w.
pub fn pure_tensor(gf: &Gf, n: usize, t: usize, w: &[Fe]) -> Vec<Fe> {
    let mut out = vec![0; n * n];
    if t < n {
        for (i, &a) in w.iter().enumerate() {
            out[t * n + i] = gf.frob(a, t as i64);
        }
    }
    out
}

/// A k-subspace of O̅⊗V given by its reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PLattice {
    pub n: usize,
    pub basis: Vec<Vec<Fe>>,
    pub codim: usize,
    pub theta_closed: bool,
    pub transversal: bool,
}

impl PLattice {
    pub fn from_vectors(gf: &Gf, n: usize, vectors: &[Vec<Fe>]) -> PLattice {
        let width = n * n;
        let basis = row_space(gf, vectors, width);
        let theta_closed = basis.iter().all(|x| {
            let y = theta_apply(gf, n, x);
            row_space(gf, &[basis.clone(), vec![y]].concat(), width).len() == basis.len()
        });
        let mut with_v = basis.clone();
        for i in 0..n {
            let mut e = vec![0; width];
            e[i] = 1;
            with_v.push(e);
        }
        let transversal = row_space(gf, &with_v, width).len() == basis.len() + n;
        PLattice { n, codim: width - basis.len(), basis, theta_closed, transversal }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn admissible(&self) -> bool {
        self.codim == self.n && self.theta_closed && self.transversal
    }

    /// Image under right multiplication by 1⊗A: θ^s⊗v ↦ θ^s⊗vA.
    pub fn right_mul(&self, gf: &Gf, a: &Mat) -> PLattice {
        let n = self.n;
        let twisted: Vec<Mat> = (0..n).map(|s| a.frob(gf, s as i64)).collect();
        let moved: Vec<Vec<Fe>> = self
            .basis
            .iter()
            .map(|x| (0..n).flat_map(|s| twisted[s].vec_mul(gf, &x[s * n..(s + 1) * n])).collect())
            .collect();
        PLattice::from_vectors(gf, n, &moved)
    }
}

/// Kernel of λ_φ(θ^s⊗m) = φ^s(m), solved in the coordinates θ^s⊗v_s where
/// each grade enters p^s-semilinearly.
pub fn kernel_of_lambda(gf: &Gf, phi: &PLinearMap) -> Result<PLattice> {
    let n = phi.n();
    let powers: Vec<Mat> = (0..n).map(|s| power_matrix(gf, &phi.b, s)).collect();
    let system: Vec<SemilinearEquation> = (0..n)
        .map(|j| {
            let mut terms = Vec::new();
            for (s, bs) in powers.iter().enumerate() {
                for i in 0..n {
                    let c = bs.get(i, j);
                    if c != 0 {
                        terms.push(SemilinearTerm { unknown: s * n + i, coeff: c, exp: s as i64 });
                    }
                }
            }
            SemilinearEquation::homogeneous(terms)
        })
        .collect();
    let sol = solve_semilinear(gf, n * n, &system)?;
    let left: Vec<Vec<Fe>> = sol
        .kernel
        .iter()
        .map(|v| v.iter().enumerate().map(|(idx, &a)| gf.frob(a, (idx / n) as i64)).collect())
        .collect();
    Ok(PLattice::from_vectors(gf, n, &left))
}

/// k-span of θ^{a+b}⊗φ^c(e_i) − θ^a⊗φ^{b+c}(e_i).
pub fn generator_span(gf: &Gf, phi: &PLinearMap) -> PLattice {
    let n = phi.n();
    let mut gens = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        let iterates: Vec<Vec<Fe>> = (0..2 * n).map(|c| twisted_apply(gf, &e, &phi.b, c)).collect();
        for a in 0..n {
            for b in 1..n {
                for c in 0..n {
                    let x = pure_tensor(gf, n, a + b, &iterates[c]);
                    let y = pure_tensor(gf, n, a, &iterates[b + c]);
                    gens.push(x.iter().zip(&y).map(|(&u, &v)| gf.sub(u, v)).collect());
                }
            }
        }
    }
    PLattice::from_vectors(gf, n, &gens)
}

pub fn lattice_of_nilpotent(gf: &Gf, phi: &PLinearMap) -> Result<PLattice> {
    if !is_p_nilpotent(gf, phi) {
        return Err(Error::NotNilpotent);
    }
    let lat = kernel_of_lambda(gf, phi)?;
    if !lat.admissible() {
        return Err(Error::HypothesisViolated(format!(
            "kernel has codim {}, θ-closed {}, transversal {}",
            lat.codim, lat.theta_closed, lat.transversal
        )));
    }
    if generator_span(gf, phi).basis != lat.basis {
        return Err(Error::Inconsistent);
    }
    Ok(lat)
}

/// φ_𝔏(m) = v where θ⊗m − 1⊗v ∈ 𝔏.
pub fn nilpotent_of_lattice(gf: &Gf, lat: &PLattice) -> Result<PLinearMap> {
    let n = lat.n;
    if !lat.admissible() {
        return Err(Error::NotTransversal);
    }
    if n < 2 {
        return Ok(PLinearMap::zero(n));
    }
    let width = n * n;
    // rows: basis of 𝔏 then e_{0,i}; invertible by transversality
    let mut rows = lat.basis.clone();
    for i in 0..n {
        let mut e = vec![0; width];
        e[i] = 1;
        rows.push(e);
    }
    let inv = Mat::from_rows(&rows).inverse(gf)?;
    let mut b = Mat::zero(n, n);
    for i in 0..n {
        let mut x = vec![0; width];
        x[n + i] = 1;
        let c = inv.vec_mul(gf, &x);
        for j in 0..n {
            b.set(i, j, c[lat.dim() + j]);
        }
    }
    let phi = PLinearMap { b };
    if !is_p_nilpotent(gf, &phi) {
        return Err(Error::NotNilpotent);
    }
    Ok(phi)
}

/// A^{[p]} B A^{-1}.
pub fn conjugate(gf: &Gf, phi: &PLinearMap, a: &Mat) -> Result<PLinearMap> {
    let inv = a.inverse(gf).map_err(|_| Error::Singular)?;
    Ok(PLinearMap { b: a.frob(gf, 1).mul(gf, &phi.b).mul(gf, &inv) })
}

/// Every θ̄-closed codim-n subspace transversal to V, as graphs of linear
/// maps from the grades ≥ 1 into V.
pub fn enumerate_transversal(gf: &Gf, n: usize, limit: u64) -> Result<Vec<PLattice>> {
    let width = n * n;
    let upper = width - n;
    let total = guard(gf, (upper * n) as u32, limit)?;
    let q = gf.q() as u64;
    let mut out = Vec::new();
    for mut code in 0..total {
        let vectors: Vec<Vec<Fe>> = (0..upper)
            .map(|t| {
                let mut x = vec![0; width];
                x[n + t] = 1;
                for xi in x.iter_mut().take(n) {
                    *xi = (code % q) as Fe;
                    code /= q;
                }
                x
            })
            .collect();
        let lat = PLattice::from_vectors(gf, n, &vectors);
        if lat.admissible() {
            out.push(lat);
        }
    }
    out.sort();
    Ok(out)
}

/// τ(u) = (Bu)^{[1/p]}, the inverse-p-linear map with ⟨u,φ(v)⟩ = ⟨τ(u),v⟩^p.
pub fn tau(gf: &Gf, phi: &PLinearMap, u: &[Fe]) -> Vec<Fe> {
    phi.b.mul_vec(gf, u).into_iter().map(|a| gf.frob(a, -1)).collect()
}

pub fn dot(gf: &Gf, u: &[Fe], v: &[Fe]) -> Fe {
    u.iter().zip(v).fold(0, |acc, (&a, &b)| gf.add(acc, gf.mul(a, b)))
}

/// ⟨Σ_r u_r⊗θ̄^r, x⟩ = Σ_{r+s=n-1} ⟨u_r, v_s⟩^{p^s} where x = Σ θ̄^s⊗v_s;
/// in left coordinates this is Σ u_r^{[p^s]}·a_s.
pub fn pairing(gf: &Gf, n: usize, u: &[Vec<Fe>], x: &[Fe]) -> Fe {
    (0..n).fold(0, |acc, s| {
        let ur: Vec<Fe> = u[n - 1 - s].iter().map(|&a| gf.frob(a, s as i64)).collect();
        gf.add(acc, dot(gf, &ur, &x[s * n..(s + 1) * n]))
    })
}

/// Σ_{i=0}^{n-1} τ^i(u)⊗θ̄^{n-1-i}, indexed by the θ̄-exponent.
pub fn complement_element(gf: &Gf, phi: &PLinearMap, u: &[Fe]) -> Vec<Vec<Fe>> {
    let n = phi.n();
    let mut out = vec![Vec::new(); n];
    let mut t = u.to_vec();
    for i in 0..n {
        out[n - 1 - i] = t.clone();
        t = tau(gf, phi, &t);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualReport {
    /// Matrix of τ^{[p]}: τ(u)^{[p]} = B u.
    pub tau_matrix: Mat,
    pub complement: Vec<Vec<Vec<Fe>>>,
    pub adjunction: bool,
    pub orthogonal: bool,
    pub right_closed: bool,
    pub is_full_complement: bool,
    pub nondegenerate: bool,
}

impl DualReport {
    pub fn passed(&self) -> bool {
        self.adjunction && self.orthogonal && self.right_closed && self.is_full_complement && self.nondegenerate
    }
}

pub fn dual_tau(gf: &Gf, phi: &PLinearMap) -> Result<DualReport> {
    let n = phi.n();
    let lat = lattice_of_nilpotent(gf, phi)?;
    let basis_vec = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    };
    let mut adjunction = true;
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (basis_vec(i), basis_vec(j));
            let lhs = dot(gf, &u, &phi.apply(gf, &v));
            let rhs = gf.frob(dot(gf, &tau(gf, phi, &u), &v), 1);
            adjunction &= lhs == rhs;
        }
    }
    let complement: Vec<Vec<Vec<Fe>>> = (0..n).map(|i| complement_element(gf, phi, &basis_vec(i))).collect();
    let orthogonal = complement.iter().all(|c| lat.basis.iter().all(|x| pairing(gf, n, c, x) == 0));
    // M(u)·θ̄ drops the θ̄^{n-1} term and shifts the rest, giving M(τu)
    let right_closed = (0..n).all(|i| {
        let c = &complement[i];
        let mut shifted = vec![vec![0; n]; n];
        for r in 0..n - 1 {
            shifted[r + 1] = c[r].clone();
        }
        shifted == complement_element(gf, phi, &tau(gf, phi, &basis_vec(i)))
    });
    // the full orthogonal has F_p-dimension m·n
    let system: Vec<SemilinearEquation> = lat
        .basis
        .iter()
        .map(|x| {
            let mut terms = Vec::new();
            for s in 0..n {
                for j in 0..n {
                    let c = x[s * n + j];
                    if c != 0 {
                        terms.push(SemilinearTerm { unknown: (n - 1 - s) * n + j, coeff: c, exp: s as i64 });
                    }
                }
            }
            SemilinearEquation::homogeneous(terms)
        })
        .collect();
    let orth = solve_semilinear(gf, n * n, &system)?;
    let is_full_complement = orth.prime_dim() == gf.m() as usize * n;
    let mut pm = Mat::zero(n * n, n * n);
    for r in 0..n {
        for j in 0..n {
            let mut u = vec![vec![0; n]; n];
            u[r][j] = 1;
            for col in 0..n * n {
                let mut x = vec![0; n * n];
                x[col] = 1;
                pm.set(r * n + j, col, pairing(gf, n, &u, &x));
            }
        }
    }
    let nondegenerate = pm.rank(gf) == n * n;
    Ok(DualReport {
        tau_matrix: phi.b.clone(),
        complement,
        adjunction,
        orthogonal,
        right_closed,
        is_full_complement,
        nondegenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_invertible, random_mat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shift2() -> PLinearMap {
        PLinearMap::new(Mat::from_rows(&[vec![0, 1], vec![0, 0]])).unwrap()
    }

    fn pointwise_nilpotent(gf: &Gf, phi: &PLinearMap) -> bool {
        let n = phi.n();
        all_matrices(gf, 1, n).all(|v| twisted_apply(gf, v.row(0), &phi.b, n).iter().all(|&a| a == 0))
    }

    #[test]
    fn twisted_apply_examples() {
        let gf = Gf::new(2, 2).unwrap();
        let v = vec![2, 3];
        assert_eq!(twisted_apply(&gf, &v, &Mat::identity(2), 1), vec![gf.frob(2, 1), gf.frob(3, 1)]);
        let f2 = Gf::prime(2).unwrap();
        assert_eq!(twisted_apply(&f2, &[1, 0], &shift2().b, 1), vec![0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let b = random_mat(&gf, 3, 3, &mut rng);
            let v: Vec<Fe> = (0..3).map(|_| gf.random(&mut rng)).collect();
            for a in 0..3 {
                for c in 0..3 {
                    let lhs = twisted_apply(&gf, &v, &b, a + c);
                    assert_eq!(lhs, twisted_apply(&gf, &twisted_apply(&gf, &v, &b, a), &b, c));
                    let f: Vec<Fe> = v.iter().map(|&x| gf.frob(x, (a + c) as i64)).collect();
                    assert_eq!(lhs, power_matrix(&gf, &b, a + c).vec_mul(&gf, &f));
                }
            }
        }
    }

    #[test]
    fn nilpotency_matches_pointwise_oracle() {
        let gf = Gf::new(2, 2).unwrap();
        assert!(is_p_nilpotent(&gf, &shift2()));
        assert!(!is_p_nilpotent(&gf, &PLinearMap::new(Mat::identity(2)).unwrap()));
        for b in all_matrices(&gf, 2, 2) {
            let phi = PLinearMap { b };
            assert_eq!(is_p_nilpotent(&gf, &phi), pointwise_nilpotent(&gf, &phi));
        }
    }

    #[test]
    fn zero_map_gives_theta_multiples() {
        let gf = Gf::prime(2).unwrap();
        let lat = lattice_of_nilpotent(&gf, &PLinearMap::zero(2)).unwrap();
        assert_eq!(lat.basis, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(nilpotent_of_lattice(&gf, &lat).unwrap(), PLinearMap::zero(2));
    }

    #[test]
    fn shift_lattice_by_hand() {
        let gf = Gf::prime(2).unwrap();
        let lat = lattice_of_nilpotent(&gf, &shift2()).unwrap();
        let expect = PLattice::from_vectors(&gf, 2, &[vec![0, 1, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(lat, expect);
    }

    #[test]
    fn rejects_non_nilpotent_and_non_transversal() {
        let gf = Gf::prime(2).unwrap();
        let id = PLinearMap::new(Mat::identity(2)).unwrap();
        assert!(matches!(lattice_of_nilpotent(&gf, &id), Err(Error::NotNilpotent)));
        let v = PLattice::from_vectors(&gf, 2, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert!(matches!(nilpotent_of_lattice(&gf, &v), Err(Error::NotTransversal)));
    }

    fn bijection(q: (u32, u32), n: usize) {
        let gf = Gf::new(q.0, q.1).unwrap();
        let nil = all_p_nilpotents(&gf, n, 1 << 16).unwrap();
        let mut lats: Vec<PLattice> = nil
            .iter()
            .map(|phi| {
                let lat = lattice_of_nilpotent(&gf, phi).unwrap();
                assert_eq!(&nilpotent_of_lattice(&gf, &lat).unwrap(), phi);
                lat
            })
            .collect();
        lats.sort();
        let all = enumerate_transversal(&gf, n, 1 << 20).unwrap();
        assert_eq!(lats, all);
    }

    #[test]
    fn bijection_f2_n2() {
        bijection((2, 1), 2);
    }

    #[test]
    fn bijection_f4_n2() {
        bijection((2, 2), 2);
    }

    #[test]
    fn equivariance_exhaustive_f2() {
        let gf = Gf::prime(2).unwrap();
        let gl: Vec<Mat> = all_matrices(&gf, 2, 2).filter(|a| a.det(&gf) != 0).collect();
        for phi in all_p_nilpotents(&gf, 2, 1 << 16).unwrap() {
            let lat = lattice_of_nilpotent(&gf, &phi).unwrap();
            for a in &gl {
                let c = conjugate(&gf, &phi, a).unwrap();
                assert!(is_p_nilpotent(&gf, &c));
                let lhs = lattice_of_nilpotent(&gf, &c).unwrap();
                assert_eq!(lhs, lat.right_mul(&gf, &a.inverse(&gf).unwrap()));
            }
        }
    }

    #[test]
    fn conjugate_identity_and_singular() {
        let gf = Gf::new(2, 2).unwrap();
        let phi = shift2();
        assert_eq!(conjugate(&gf, &phi, &Mat::identity(2)).unwrap(), phi);
        assert!(matches!(conjugate(&gf, &phi, &Mat::zero(2, 2)), Err(Error::Singular)));
    }

    #[test]
    fn duality_examples() {
        let gf = Gf::prime(2).unwrap();
        let z = dual_tau(&gf, &PLinearMap::zero(2)).unwrap();
        assert!(z.passed());
        assert_eq!(z.complement[0], vec![vec![0, 0], vec![1, 0]]);
        assert!(dual_tau(&gf, &shift2()).unwrap().passed());
        let gf4 = Gf::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = 0;
        while seen < 30 {
            let a = random_invertible(&gf4, 3, &mut rng);
            let phi = conjugate(&gf4, &PLinearMap { b: random_upper(&gf4, 3, &mut rng) }, &a).unwrap();
            assert!(dual_tau(&gf4, &phi).unwrap().passed());
            seen += 1;
        }
    }

    fn random_upper(gf: &Gf, n: usize, rng: &mut ChaCha8Rng) -> Mat {
        let mut b = random_mat(gf, n, n, rng);
        for i in 0..n {
            for j in 0..=i {
                b.set(i, j, 0);
            }
        }
        b
    }
}
