//! Dense matrices over Q with exact rank, determinant, inverse and kernels.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    /// Builds a matrix whose rows are the given vectors. All rows must share a length.
    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        RationalMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, v: &[i64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        RationalMatrix { rows, cols, data: v.iter().map(|&x| crate::rational::q(x)).collect() }
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Q) -> Self {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Row i scaled to integers, plus the scale factor used.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let r = &self.data[i * self.cols..(i + 1) * self.cols];
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(r.iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scales.push(l);
        }
        (rows, scales)
    }

    /// Exact rank by fraction-free (Bareiss) elimination on integer-scaled rows.
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.integer_rows();
        bareiss(&mut m, self.cols).0
    }

    pub fn det(&self) -> Result<Q, Error> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Q::one());
        }
        let (mut m, scales) = self.integer_rows();
        let (rank, sign) = bareiss(&mut m, n);
        if rank < n {
            return Ok(Q::zero());
        }
        let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        let mut d = Q::new(m[n - 1][n - 1].clone(), denom);
        if sign < 0 {
            d = -d;
        }
        Ok(d)
    }

    /// Reduced row echelon form over Q and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = Q::one() / &m[(r, c)];
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel {v : M v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, piv) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -r[(i, free)].clone();
            }
            out.push(v);
        }
        out
    }
}

/// In-place Bareiss elimination; returns (rank, permutation sign).
/// For a full-rank square input the last pivot is the determinant.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> (usize, i32) {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut sign = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    (r, sign)
}

/// Rank of the span of the given vectors.
pub fn span_rank(vs: &[Vec<Q>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    RationalMatrix::from_rows(vs).rank()
}

pub fn in_span(basis: &[Vec<Q>], v: &[Q]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_rank(basis) == span_rank(&all)
}

pub fn same_span(u: &[Vec<Q>], v: &[Vec<Q>]) -> bool {
    let ru = span_rank(u);
    let rv = span_rank(v);
    if ru != rv {
        return false;
    }
    let mut all = u.to_vec();
    all.extend(v.iter().cloned());
    span_rank(&all) == ru
}

/// A nonzero λ with Σ λ_i v_i = 0, if the vectors are dependent.
pub fn dependency(vs: &[Vec<Q>]) -> Option<Vec<Q>> {
    if vs.is_empty() {
        return None;
    }
    RationalMatrix::from_rows(vs).transpose().nullspace().into_iter().next()
}

/// A basis (subset of the inputs, in order) of the span of the vectors.
pub fn independent_subset(vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vs.is_empty() {
        return vec![];
    }
    let (_, piv) = RationalMatrix::from_rows(vs).transpose().rref();
    piv.into_iter().map(|i| vs[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn rank_and_det_small() {
        let m = RationalMatrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 1]);
        assert_eq!(m.rank(), 2);
        // 2·(3−2) − 0 + 1·(1−3) = 0
        assert_eq!(m.det().unwrap(), q(0));
        let m = RationalMatrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]);
        assert_eq!(m.det().unwrap(), q(6));
        let mut h = RationalMatrix::zeros(2, 2);
        h[(0, 0)] = frac(1, 2);
        h[(0, 1)] = frac(1, 3);
        h[(1, 0)] = frac(1, 3);
        h[(1, 1)] = frac(1, 4);
        assert_eq!(h.det().unwrap(), frac(1, 72));
        assert_eq!(h.mul(&h.inverse().unwrap()), RationalMatrix::identity(2));
    }

    #[test]
    fn swap_sign() {
        let m = RationalMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(m.det().unwrap(), q(-1));
    }

    #[test]
    fn kernel_and_span() {
        let m = RationalMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let a = vec![q(1), q(0), q(1)];
        let b = vec![q(0), q(1), q(1)];
        assert!(in_span(&[a.clone(), b.clone()], &[q(2), q(-3), q(-1)]));
        assert!(!in_span(&[a.clone(), b.clone()], &[q(0), q(0), q(1)]));
        let d = dependency(&[a.clone(), b.clone(), vec![q(1), q(1), q(2)]]).unwrap();
        let s: Vec<Q> = (0..3).map(|k| &d[0] * &a[k] + &d[1] * &b[k] + &d[2] * q([1, 1, 2][k])).collect();
        assert!(s.iter().all(Zero::is_zero));
    }
}
