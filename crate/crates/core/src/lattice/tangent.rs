//! Tangent spaces of lattices, the Hom constraint system and additive characters.

use std::collections::BTreeMap;

use super::{replaced_determinants, smith_form, Lattice, WittMatrix};
use crate::error::{Error, Result};
use crate::gf::{solve_semilinear, Fe, Gf, SemilinearEquation, SemilinearTerm};
use crate::linalg::{row_space, Mat};
use crate::ore::{ore_smith, OreElement, OreRing};
use crate::ring::{Dual, Ring};
use crate::witt::{generate_structure_polynomials, GaloisRing, WittGeneric};

/// Subspace of k^{n·s}; coordinate i·s + k is digit k of component i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentReport {
    pub n: usize,
    pub s: usize,
    pub basis: Vec<Vec<Fe>>,
    pub theta_closed: bool,
}

impl TangentReport {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn build(gf: &Gf, n: usize, s: usize, vectors: &[Vec<Fe>]) -> TangentReport {
        let basis = row_space(gf, vectors, n * s);
        let rank = basis.len();
        let theta_closed = basis.iter().all(|b| {
            let mut ext = basis.clone();
            ext.push(theta_shift(gf, b, n, s));
            Mat::from_rows(&ext).rank(gf) == rank
        });
        TangentReport { n, s, basis, theta_closed }
    }
}

/// (v_0, .., v_{s-1}) -> (0, v_0^p, .., v_{s-2}^p) in every component.
pub fn theta_shift(gf: &Gf, v: &[Fe], n: usize, s: usize) -> Vec<Fe> {
    let mut out = vec![0; n * s];
    for i in 0..n {
        for k in 1..s {
            out[i * s + k] = gf.frob(v[i * s + k - 1], 1);
        }
    }
    out
}

fn dual_witt(gr: &GaloisRing) -> Result<WittGeneric<Dual>> {
    WittGeneric::new(Dual { gf: gr.field().clone() }, gr.p() as u32, gr.s() as usize)
}

fn embed_dual(gr: &GaloisRing, g: &crate::witt::GrElem) -> Vec<(Fe, Fe)> {
    gr.to_digits(g).into_iter().map(|d| (d, 0)).collect()
}

/// Tangent space at 0 of L = A^{-1}·⊕ p^{d_i}W: the image under d(A^{-1}) of
/// the digit directions k >= d_i in component i.
pub fn lie_algebra(gr: &GaloisRing, lat: &Lattice) -> Result<TangentReport> {
    let n = lat.n();
    let s = gr.s() as usize;
    let sm = smith_form(gr, &lat.span);
    let ainv = sm.a.inverse(gr)?;
    let w = dual_witt(gr)?;
    let mut vectors = Vec::new();
    for i in 0..n {
        for k in sm.diag[i] as usize..s {
            let dir = w.monomial(k, (0, 1));
            let mut v = vec![0; n * s];
            for r in 0..n {
                let img = w.mul(&embed_dual(gr, &ainv.get(r, i)), &dir);
                for (kk, d) in img.iter().enumerate() {
                    debug_assert_eq!(d.0, 0);
                    v[r * s + kk] = d.1;
                }
            }
            vectors.push(v);
        }
    }
    Ok(TangentReport::build(gr.field(), n, s, &vectors))
}

/// Common kernel of the differentials of the digits η_{j,i}, i < colength,
/// of the replaced-column determinants Δ_j(U, εv).
pub fn lie_algebra_eta(gr: &GaloisRing, u: &WittMatrix, colength: usize) -> Result<TangentReport> {
    let n = u.rows;
    let s = gr.s() as usize;
    if colength > s {
        return Err(Error::TruncationTooShort(format!("colength {colength} exceeds s = {s}")));
    }
    let w = dual_witt(gr)?;
    let cols: Vec<Vec<Vec<(Fe, Fe)>>> =
        (0..u.cols).map(|j| u.col(j).iter().map(|g| embed_dual(gr, g)).collect()).collect();
    let mut jac = Mat::zero(u.cols * colength, n * s);
    for r in 0..n {
        for k in 0..s {
            let mut v = vec![w.zero(); n];
            v[r] = w.monomial(k, (0, 1));
            for (j, d) in replaced_determinants(&w, &cols, &v).iter().enumerate() {
                for i in 0..colength {
                    jac.set(j * colength + i, r * s + k, d[i].1);
                }
            }
        }
    }
    let kernel = jac.nullspace(gr.field());
    Ok(TangentReport::build(gr.field(), n, s, &kernel))
}

/// Elementary divisors of (O/θ^s)^n modulo the θ-closed subspace, read as a
/// left Ore submodule.
pub fn quotient_ore_type(gf: &Gf, rep: &TangentReport) -> Vec<u32> {
    let ring = OreRing::new(gf, rep.s);
    let rows: Vec<Vec<OreElement>> = rep
        .basis
        .iter()
        .map(|b| (0..rep.n).map(|i| OreElement { coeffs: b[i * rep.s..(i + 1) * rep.s].to_vec() }).collect())
        .collect();
    ore_smith(&ring, &rows, rep.n).into_iter().map(|x| x as u32).collect()
}

/// Linear constraints on the p-polynomial coefficients c_{a,b,w} of maps
/// x̄_a -> piece b, entry c·x^{p^w}.
#[derive(Debug, Clone)]
pub struct HomConstraintSystem {
    /// (component, weight) of each source generator.
    pub sources: Vec<(usize, u32)>,
    /// (component, graded degree) of each target piece.
    pub targets: Vec<(usize, u32)>,
    /// Frobenius exponents range over -window..=window.
    pub window: i64,
    pub unknowns: Vec<(usize, usize, i64)>,
    pub rows: Vec<SemilinearEquation>,
}

pub fn hom_constraint_system(ty: &[u32], s: u32) -> Result<HomConstraintSystem> {
    if ty.is_empty() || ty.iter().sum::<u32>() != s || ty.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::TypeInvalid(format!("{ty:?} with s = {s}")));
    }
    let sources: Vec<(usize, u32)> = ty.iter().enumerate().filter(|(_, &a)| a < s).map(|(i, &a)| (i, a)).collect();
    let targets: Vec<(usize, u32)> = ty.iter().enumerate().flat_map(|(i, &a)| (0..a).map(move |j| (i, j))).collect();
    let window = s as i64 - 1;
    let mut unknowns = Vec::new();
    for a in 0..sources.len() {
        for b in 0..targets.len() {
            for w in -window..=window {
                unknowns.push((a, b, w));
            }
        }
    }
    let mut rows = Vec::new();
    // weight matching against the diagonal coaction; p acts through W -> k on
    // source and target alike, so the θ-compatibility rows vanish identically
    for (u, &(a, b, w)) in unknowns.iter().enumerate() {
        if sources[a].1 as i64 + w != targets[b].1 as i64 {
            rows.push(SemilinearEquation::homogeneous(vec![SemilinearTerm { unknown: u, coeff: 1, exp: 0 }]));
        }
    }
    Ok(HomConstraintSystem { sources, targets, window, unknowns, rows })
}

/// Dimension over k of the equivariant additive maps for a lattice of type
/// `ty` at truncation s = colength.
pub fn hom_dimension(gf: &Gf, ty: &[u32], s: u32) -> Result<usize> {
    let sys = hom_constraint_system(ty, s)?;
    let sol = solve_semilinear(gf, sys.unknowns.len(), &sys.rows)?;
    Ok(sol.prime_dim() / gf.m() as usize)
}

pub fn hom_dimension_of(gr: &GaloisRing, lat: &Lattice) -> Result<usize> {
    if lat.colength != gr.s() {
        return Err(Error::PrecisionError(format!("colength {} but s = {}", lat.colength, gr.s())));
    }
    hom_dimension(gr.field(), &lat.ty, gr.s())
}

/// Σ coeff · x_{component, digit}^{p^w}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveCharacter {
    pub terms: Vec<(usize, usize, u32, Fe)>,
    /// Torus weight e with λ acting by λ^e, when homogeneous.
    pub weight: Option<u64>,
}

impl AdditiveCharacter {
    pub fn eval(&self, gf: &Gf, x: &[Vec<Fe>]) -> Fe {
        self.terms
            .iter()
            .fold(0, |acc, &(c, j, w, a)| gf.add(acc, gf.mul(a, gf.frob(x[c][j], w as i64))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveCharacterBasis {
    pub lengths: Vec<u32>,
    pub characters: Vec<AdditiveCharacter>,
}

/// Additive, V-linear p-polynomial maps ⊕ W_{ℓ_c} -> G_a, with exponents up to p^{ℓ_c}.
pub fn additive_characters(gf: &Gf, lengths: &[u32]) -> Result<AdditiveCharacterBasis> {
    let p = gf.p();
    let mut unknowns: Vec<(usize, usize, u32)> = Vec::new();
    for (c, &l) in lengths.iter().enumerate() {
        for j in 0..l as usize {
            for w in 0..=l {
                unknowns.push((c, j, w));
            }
        }
    }
    // (component, identity kind, exponent vector) -> Σ coeff·unknown
    let mut eqs: BTreeMap<(usize, u8, Vec<u64>), BTreeMap<usize, u32>> = BTreeMap::new();
    let mut bump = |key: (usize, u8, Vec<u64>), u: usize, c: u32| {
        let e = eqs.entry(key).or_default().entry(u).or_insert(0);
        *e = (*e + c) % p;
    };
    for (u, &(c, j, w)) in unknowns.iter().enumerate() {
        let l = lengths[c] as usize;
        let table = generate_structure_polynomials(p, l)?;
        let pw = (p as u64).pow(w);
        for (kind, poly) in [(0u8, &table.add_polys[j]), (1u8, &table.mul_polys[j])] {
            for (coef, exps) in &poly.terms {
                bump((c, kind, exps.iter().map(|&e| e as u64 * pw).collect()), u, *coef);
            }
        }
        let mono = |a: usize, ea: u64, b: Option<(usize, u64)>| {
            let mut v = vec![0u64; 2 * l];
            v[a] = ea;
            if let Some((b, eb)) = b {
                v[b] = eb;
            }
            v
        };
        // additivity: Φ_j(x, y)^{p^w} - x_j^{p^w} - y_j^{p^w}
        bump((c, 0, mono(j, pw, None)), u, p - 1);
        bump((c, 0, mono(l + j, pw, None)), u, p - 1);
        // V-linearity: Ψ_j(a, x)^{p^w} - a_0 x_j^{p^w}
        bump((c, 1, mono(0, 1, Some((l + j, pw)))), u, p - 1);
    }
    let rows: Vec<SemilinearEquation> = eqs
        .into_values()
        .filter(|m| m.values().any(|&c| c != 0))
        .map(|m| {
            SemilinearEquation::homogeneous(
                m.into_iter()
                    .filter(|&(_, c)| c != 0)
                    .map(|(u, c)| SemilinearTerm { unknown: u, coeff: c, exp: 0 })
                    .collect(),
            )
        })
        .collect();
    let fp = gf.prime_field();
    let sol = solve_semilinear(&fp, unknowns.len(), &rows)?;
    let characters = sol
        .kernel
        .iter()
        .map(|v| {
            let terms: Vec<(usize, usize, u32, Fe)> = v
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(u, &a)| (unknowns[u].0, unknowns[u].1, unknowns[u].2, a))
                .collect();
            let ws: Vec<u64> = terms.iter().map(|&(_, j, w, _)| (p as u64).pow(j as u32 + w)).collect();
            let weight = ws.first().copied().filter(|w0| ws.iter().all(|x| x == w0));
            AdditiveCharacter { terms, weight }
        })
        .collect();
    Ok(AdditiveCharacterBasis { lengths: lengths.to_vec(), characters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{canonical_form, enumerate_lattices};
    use crate::witt::{WittRing, WittVector};

    fn gr(p: u32, m: u32, s: u32) -> GaloisRing {
        GaloisRing::new(&Gf::new(p, m).unwrap(), s).unwrap()
    }

    #[test]
    fn tangent_of_p_w() {
        let g = gr(2, 1, 2);
        let lat = canonical_form(&g, &WittMatrix::diagonal(&g, &[1]));
        let rep = lie_algebra(&g, &lat).unwrap();
        assert_eq!(rep.basis, vec![vec![0, 1]]);
        assert!(rep.theta_closed);
        let full = canonical_form(&g, &WittMatrix::identity(&g, 2));
        assert_eq!(lie_algebra(&g, &full).unwrap().dim(), 4);
    }

    #[test]
    fn tangent_dimension_and_closure_over_enumeration() {
        let g = gr(2, 1, 2);
        for c in 0..=4 {
            for lat in enumerate_lattices(&g, 2, c).unwrap() {
                let rep = lie_algebra(&g, &lat).unwrap();
                assert!(rep.theta_closed, "{lat:?}");
                assert_eq!(rep.dim(), 4 - c as usize);
                assert_eq!(quotient_ore_type(g.field(), &rep), lat.ty);
            }
        }
    }

    #[test]
    fn eta_kernel_is_degenerate_on_p_f() {
        let g = gr(2, 1, 2);
        let u = WittMatrix::diagonal(&g, &[1, 1]);
        assert_eq!(lie_algebra_eta(&g, &u, 2).unwrap().dim(), 4);
        assert_eq!(lie_algebra(&g, &canonical_form(&g, &u)).unwrap().dim(), 2);
    }

    #[test]
    fn hom_dimension_closed_form() {
        let gf = Gf::new(2, 1).unwrap();
        assert_eq!(hom_dimension(&gf, &[2, 0], 2).unwrap(), 2);
        assert_eq!(hom_dimension(&gf, &[1, 1], 2).unwrap(), 4);
        assert_eq!(hom_dimension(&gf, &[3, 0, 0], 3).unwrap(), 6);
        assert_eq!(hom_dimension(&gf, &[2, 1, 0], 3).unwrap(), 9);
        assert!(hom_dimension(&gf, &[1, 0], 2).is_err());
    }

    #[test]
    fn hom_dimension_against_map_count() {
        let big = Gf::new(2, 6).unwrap();
        for (m, ty) in [(1, vec![2, 0]), (1, vec![1, 1]), (2, vec![2, 0])] {
            let gf = Gf::new(2, m).unwrap();
            let dim = hom_dimension(&gf, &ty, 2).unwrap();
            let count = crate::oracle::count_equivariant_maps(&gf, &big, &ty, 2, 1 << 13).unwrap();
            assert_eq!(count, (gf.q() as u64).pow(dim as u32), "{ty:?} over F_{}", gf.q());
        }
    }

    #[test]
    fn characters_of_small_witt_groups() {
        let gf = Gf::new(2, 2).unwrap();
        let w1 = additive_characters(&gf, &[1]).unwrap();
        assert_eq!(w1.characters.len(), 1);
        assert_eq!(w1.characters[0].terms, vec![(0, 0, 0, 1)]);
        let w2 = additive_characters(&gf, &[2]).unwrap();
        assert!(w2.characters.iter().any(|c| c.terms == vec![(0, 0, 0, 1)]));
        for q in [(2, 1), (2, 2), (3, 1)] {
            let gf = Gf::new(q.0, q.1).unwrap();
            for l in 1..=3usize {
                let basis = additive_characters(&gf, &[l as u32]).unwrap();
                let wr = WittRing::new(&gf, l).unwrap();
                let pts: Vec<WittVector> = wr.galois().elements().iter().map(|g| wr.teichmuller_digits(g)).collect();
                for ch in &basis.characters {
                    for x in &pts {
                        for y in &pts {
                            let s = wr.add(x, y).unwrap();
                            let f = |v: &WittVector| ch.eval(&gf, &[v.digits.clone()]);
                            assert_eq!(f(&s), gf.add(f(x), f(y)));
                            let prod = wr.mul(x, y).unwrap();
                            assert_eq!(f(&prod), gf.mul(x.digits[0], f(y)));
                        }
                    }
                }
            }
        }
    }
}
