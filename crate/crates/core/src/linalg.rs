//! Dense matrices over a small finite field.

use crate::error::{Error, Result};
use crate::gf::{Fe, Gf};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, gf: &Gf, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = gf.add(out.get(i, j), gf.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, gf: &Gf, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| gf.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, gf: &Gf, c: Fe) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| gf.mul(c, a)).collect() }
    }

    /// Entrywise a ↦ a^{p^e}.
    pub fn frob(&self, gf: &Gf, e: i64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| gf.frob(a, e)).collect() }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, gf: &Gf, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = gf.add(*o, gf.mul(a, self.get(i, j)));
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, gf: &Gf, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| gf.add(acc, gf.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, gf: &Gf) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = gf.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = gf.mul(inv, self.get(r, j));
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = gf.sub(self.get(i, j), gf.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, gf: &Gf) -> usize {
        self.clone().rref(gf).len()
    }

    /// Basis of {x : self · x = 0} (column vectors).
    pub fn nullspace(&self, gf: &Gf) -> Vec<Vec<Fe>> {
        let mut a = self.clone();
        let pivots = a.rref(gf);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = gf.neg(a.get(row, f));
                }
                v
            })
            .collect()
    }

    /// Basis of {x : x · self = 0} (row vectors).
    pub fn left_nullspace(&self, gf: &Gf) -> Vec<Vec<Fe>> {
        self.transpose().nullspace(gf)
    }

    pub fn det(&self, gf: &Gf) -> Fe {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| a.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                for j in 0..n {
                    a.data.swap(pr * n + j, c * n + j);
                }
                det = gf.neg(det);
            }
            let piv = a.get(c, c);
            det = gf.mul(det, piv);
            let inv = gf.inv(piv);
            for i in c + 1..n {
                let f = gf.mul(a.get(i, c), inv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let v = gf.sub(a.get(i, j), gf.mul(f, a.get(c, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, gf: &Gf) -> Result<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref(gf);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Ok(inv)
    }
}

/// Reduced echelon basis of the row space of `vectors`.
pub fn row_space(gf: &Gf, vectors: &[Vec<Fe>], width: usize) -> Vec<Vec<Fe>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = Mat::from_rows(vectors);
    assert_eq!(m.cols, width);
    let r = m.rref(gf).len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

pub fn random_mat<R: rand::Rng + ?Sized>(gf: &Gf, rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat { rows, cols, data: (0..rows * cols).map(|_| gf.random(rng)).collect() }
}

pub fn random_invertible<R: rand::Rng + ?Sized>(gf: &Gf, n: usize, rng: &mut R) -> Mat {
    loop {
        let m = random_mat(gf, n, n, rng);
        if m.det(gf) != 0 {
            return m;
        }
    }
}

/// Iterates all matrices of the given shape (row-major codes).
pub fn all_matrices(gf: &Gf, rows: usize, cols: usize) -> impl Iterator<Item = Mat> + '_ {
    let q = gf.q() as u64;
    let total = q.pow((rows * cols) as u32);
    (0..total).map(move |mut code| {
        let mut data = vec![0; rows * cols];
        for d in data.iter_mut() {
            *d = (code % q) as Fe;
            code /= q;
        }
        Mat { rows, cols, data }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_and_det() {
        let gf = Gf::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..5 {
            for _ in 0..50 {
                let a = random_invertible(&gf, n, &mut rng);
                let inv = a.inverse(&gf).unwrap();
                assert_eq!(a.mul(&gf, &inv), Mat::identity(n));
                let b = random_mat(&gf, n, n, &mut rng);
                assert_eq!(a.mul(&gf, &b).det(&gf), gf.mul(a.det(&gf), b.det(&gf)));
            }
        }
        let s = Mat::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.det(&gf), gf.sub(gf.mul(1, 4), gf.mul(2, 2)));
    }

    #[test]
    fn nullspace_dimension() {
        let gf = Gf::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let a = random_mat(&gf, 3, 5, &mut rng);
            let ns = a.nullspace(&gf);
            assert_eq!(ns.len() + a.rank(&gf), 5);
            for v in ns {
                assert!(a.mul_vec(&gf, &v).iter().all(|&x| x == 0));
            }
            for v in a.left_nullspace(&gf) {
                assert!(a.vec_mul(&gf, &v).iter().all(|&x| x == 0));
            }
        }
    }
}
