//! Brute-force references for small parameters: explicit submodule closure
//! in W_s(F_q)^n and exhaustive counts of equivariant p-polynomial maps.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::gf::{Fe, Gf};
use crate::ring::Ring;
use crate::witt::{GaloisRing, GrElem};

/// All q^{ns} vectors of W_s(F_q)^n with an index.
pub struct VectorUniverse {
    pub gr: GaloisRing,
    pub n: usize,
    pub scalars: Vec<GrElem>,
    pub vectors: Vec<Vec<GrElem>>,
    index: HashMap<Vec<GrElem>, usize>,
}

impl VectorUniverse {
    pub fn new(gr: &GaloisRing, n: usize, limit: usize) -> Result<VectorUniverse> {
        let scalars = gr.elements();
        let total = scalars.len().checked_pow(n as u32).filter(|&t| t <= limit).ok_or_else(|| {
            Error::SizeGuard(format!("{}^{n} vectors exceed {limit}", scalars.len()))
        })?;
        let mut vectors = Vec::with_capacity(total);
        for mut code in 0..total {
            let v: Vec<GrElem> = (0..n)
                .map(|_| {
                    let x = scalars[code % scalars.len()];
                    code /= scalars.len();
                    x
                })
                .collect();
            vectors.push(v);
        }
        let index = vectors.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ok(VectorUniverse { gr: gr.clone(), n, scalars, vectors, index })
    }

    pub fn index_of(&self, v: &[GrElem]) -> usize {
        self.index[v]
    }

    /// Closure of {0} under x -> x + a·g for every scalar a and generator g.
    pub fn closure(&self, gens: &[Vec<GrElem>]) -> Vec<bool> {
        let gr = &self.gr;
        let mut inside = vec![false; self.vectors.len()];
        let zero = vec![GrElem::ZERO; self.n];
        let z = self.index_of(&zero);
        inside[z] = true;
        let mut stack = vec![z];
        let multiples: Vec<Vec<Vec<GrElem>>> = gens
            .iter()
            .map(|g| self.scalars.iter().map(|a| g.iter().map(|x| gr.mul(a, x)).collect()).collect())
            .collect();
        while let Some(i) = stack.pop() {
            let x = &self.vectors[i];
            for ms in &multiples {
                for m in ms {
                    let y: Vec<GrElem> = x.iter().zip(m).map(|(a, b)| gr.add(a, b)).collect();
                    let k = self.index_of(&y);
                    if !inside[k] {
                        inside[k] = true;
                        stack.push(k);
                    }
                }
            }
        }
        inside
    }

    /// Length of W^n / S for a submodule of size |S|.
    pub fn colength(&self, set: &[bool]) -> u32 {
        let size = set.iter().filter(|&&b| b).count();
        let q = self.gr.field().q() as usize;
        let mut ratio = self.vectors.len() / size;
        let mut len = 0;
        while ratio > 1 {
            ratio /= q;
            len += 1;
        }
        len
    }

    /// Every submodule, as the closure of every n-tuple of vectors.
    pub fn all_submodules(&self) -> Result<Vec<Vec<bool>>> {
        let total = self.vectors.len().checked_pow(self.n as u32).filter(|&t| t <= 1 << 22).ok_or_else(|| {
            Error::SizeGuard("too many generator tuples".into())
        })?;
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        for mut code in 0..total {
            let gens: Vec<Vec<GrElem>> = (0..self.n)
                .map(|_| {
                    let v = self.vectors[code % self.vectors.len()].clone();
                    code /= self.vectors.len();
                    v
                })
                .collect();
            seen.insert(self.closure(&gens));
        }
        let mut out: Vec<Vec<bool>> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }
}

/// Images of the elements of `small` in `big` under a field embedding.
pub fn embed_field(small: &Gf, big: &Gf) -> Result<Vec<Fe>> {
    if small.p() != big.p() || big.m() % small.m() != 0 {
        return Err(Error::ParamsMismatch);
    }
    let f = small.modulus();
    let root = big
        .elements()
        .find(|&r| f.iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, r), big.from_int(c as i64))) == 0)
        .ok_or(Error::Inconsistent)?;
    Ok(small
        .elements()
        .map(|a| small.coeffs(a).iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, root), big.from_int(c as i64))))
        .collect())
}

/// Counts coefficient tensors c ∈ F_q over (source, piece, w) whose maps
/// x ↦ Σ_w c x^{p^w} commute with the torus on every point of `big`:
/// source i has weight p^{α_i} (α_i < s), piece (i', j) weight p^j.
pub fn count_equivariant_maps(coeff: &Gf, big: &Gf, ty: &[u32], s: u32, limit: u64) -> Result<u64> {
    let emb = embed_field(coeff, big)?;
    let sources: Vec<u32> = ty.iter().copied().filter(|&a| a < s).collect();
    let pieces: Vec<u32> = ty.iter().flat_map(|&a| 0..a).collect();
    let ws: Vec<i64> = (-(s as i64 - 1)..=s as i64 - 1).collect();
    let slots = sources.len() * pieces.len() * ws.len();
    let q = coeff.q() as u64;
    let total = q.checked_pow(slots as u32).filter(|&t| t <= limit).ok_or_else(|| {
        Error::SizeGuard(format!("{q}^{slots} coefficient tensors exceed {limit}"))
    })?;
    let lambda = big
        .elements()
        .skip(1)
        .find(|&g| (1..big.q() - 1).all(|k| big.pow(g, k as u64) != 1))
        .ok_or(Error::Inconsistent)?;
    let act = |e: i64, x: Fe| big.mul(big.frob(lambda, e), x);
    let mut count = 0;
    for mut code in 0..total {
        let c: Vec<Fe> = (0..slots)
            .map(|_| {
                let d = emb[(code % q) as usize];
                code /= q;
                d
            })
            .collect();
        let f = |a: usize, b: usize, x: Fe| -> Fe {
            ws.iter().enumerate().fold(0, |acc, (k, &w)| {
                let cc = c[(a * pieces.len() + b) * ws.len() + k];
                if cc == 0 {
                    acc
                } else {
                    big.add(acc, big.mul(cc, big.frob(x, w)))
                }
            })
        };
        let ok = (0..sources.len()).all(|a| {
            (0..pieces.len()).all(|b| {
                big.elements().all(|x| f(a, b, act(sources[a] as i64, x)) == act(pieces[b] as i64, f(a, b, x)))
            })
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}
