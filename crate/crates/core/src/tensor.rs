//! Dense order-3 tensors over Q, flattenings and contractions.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::RationalMatrix;
use crate::rational::{one, q, Q};
use crate::Error;

pub type Vector = Vec<Q>;

pub fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = vec![Q::zero(); dim];
    v[i] = one();
    v
}

pub fn vec_i64(v: &[i64]) -> Vector {
    v.iter().map(|&x| q(x)).collect()
}

pub fn vec_add(u: &[Q], v: &[Q]) -> Vector {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(u: &[Q], v: &[Q]) -> Vector {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(s: &Q, v: &[Q]) -> Vector {
    v.iter().map(|a| s * a).collect()
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    A,
    B,
    C,
}

impl Factor {
    pub const ALL: [Factor; 3] = [Factor::A, Factor::B, Factor::C];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Term {
    pub coeff: Q,
    pub a: Vector,
    pub b: Vector,
    pub c: Vector,
}

impl Rank1Term {
    pub fn new(coeff: Q, a: Vector, b: Vector, c: Vector) -> Self {
        Rank1Term { coeff, a, b, c }
    }

    pub fn unit(a: Vector, b: Vector, c: Vector) -> Self {
        Rank1Term { coeff: one(), a, b, c }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.len(), self.b.len(), self.c.len())
    }

    pub fn to_tensor(&self) -> Tensor3 {
        let mut t = Tensor3::zeros(self.dims());
        t.add_outer(&self.coeff, &self.a, &self.b, &self.c);
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    data: Vec<Q>,
}

impl Tensor3 {
    pub fn zeros(dims: (usize, usize, usize)) -> Self {
        Tensor3 { dims, data: vec![Q::zero(); dims.0 * dims.1 * dims.2] }
    }

    pub fn from_entries(dims: (usize, usize, usize), data: Vec<Q>) -> Result<Self, Error> {
        if data.len() != dims.0 * dims.1 * dims.2 {
            return Err(Error::Dimension(format!("{} entries for dims {dims:?}", data.len())));
        }
        Ok(Tensor3 { dims, data })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Q> {
        self.data
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims.1 + j) * self.dims.2 + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.data[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Q) {
        let n = self.idx(i, j, k);
        self.data[n] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// `self += s * a⊗b⊗c`.
    pub fn add_outer(&mut self, s: &Q, a: &[Q], b: &[Q], c: &[Q]) {
        assert_eq!((a.len(), b.len(), c.len()), self.dims, "factor dims");
        if s.is_zero() {
            return;
        }
        let integral = |v: &[Q]| v.iter().all(|x| x.is_integer());
        if s.is_integer() && integral(a) && integral(b) && integral(c) {
            self.add_outer_integral(s.numer(), a, b, c);
            return;
        }
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let sa = s * ai;
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let sab = &sa * bj;
                let base = (i * self.dims.1 + j) * self.dims.2;
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        self.data[base + k] += &sab * ck;
                    }
                }
            }
        }
    }

    /// Integer factors skip the gcd work of rational products.
    fn add_outer_integral(&mut self, s: &BigInt, a: &[Q], b: &[Q], c: &[Q]) {
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let sa = s * ai.numer();
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let sab = &sa * bj.numer();
                let base = (i * self.dims.1 + j) * self.dims.2;
                for (k, ck) in c.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    let v = &sab * ck.numer();
                    let x = &mut self.data[base + k];
                    *x = if x.is_integer() { Q::from_integer(x.numer() + v) } else { &*x + Q::from_integer(v) };
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Tensor3) {
        assert_eq!(self.dims, other.dims);
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }

    pub fn add_scaled(&mut self, s: &Q, other: &Tensor3) {
        assert_eq!(self.dims, other.dims);
        if s.is_zero() {
            return;
        }
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                *x += s * y;
            }
        }
    }

    pub fn scaled(&self, s: &Q) -> Tensor3 {
        Tensor3 { dims: self.dims, data: self.data.iter().map(|x| s * x).collect() }
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims, other.dims);
        Tensor3 { dims: self.dims, data: self.data.iter().zip(&other.data).map(|(x, y)| x - y).collect() }
    }

    /// Applies invertible (or any) linear maps to each factor: (g_A ⊗ g_B ⊗ g_C) T.
    pub fn change_basis(&self, ga: &RationalMatrix, gb: &RationalMatrix, gc: &RationalMatrix) -> Tensor3 {
        let (da, db, dc) = self.dims;
        assert_eq!((ga.cols, gb.cols, gc.cols), (da, db, dc));
        let mut out = Tensor3::zeros((ga.rows, gb.rows, gc.rows));
        for i in 0..da {
            for j in 0..db {
                for k in 0..dc {
                    let v = self.get(i, j, k);
                    if v.is_zero() {
                        continue;
                    }
                    out.add_outer(v, &ga.col(i), &gb.col(j), &gc.col(k));
                }
            }
        }
        out
    }

    /// Same tensor with the factors cyclically or otherwise permuted: `perm[s]` is the
    /// source factor placed in slot s.
    pub fn permute_factors(&self, perm: [Factor; 3]) -> Tensor3 {
        let d = [self.dims.0, self.dims.1, self.dims.2];
        let slot = |f: Factor| f as usize;
        let nd = (d[slot(perm[0])], d[slot(perm[1])], d[slot(perm[2])]);
        let mut out = Tensor3::zeros(nd);
        for i in 0..d[0] {
            for j in 0..d[1] {
                for k in 0..d[2] {
                    let src = [i, j, k];
                    out.set(src[slot(perm[0])], src[slot(perm[1])], src[slot(perm[2])], self.get(i, j, k).clone());
                }
            }
        }
        out
    }
}

pub fn tensor_from_terms(terms: &[Rank1Term], dims: (usize, usize, usize)) -> Result<Tensor3, Error> {
    let mut t = Tensor3::zeros(dims);
    for (n, term) in terms.iter().enumerate() {
        if term.dims() != dims {
            return Err(Error::Dimension(format!("term {n} has dims {:?}, expected {dims:?}", term.dims())));
        }
        t.add_outer(&term.coeff, &term.a, &term.b, &term.c);
    }
    Ok(t)
}

/// Matrix multiplication tensor with A-index i*n+j, B-index j*n+k and C-index k*n+i,
/// i.e. the trilinear form trace(XYZ). The C slot holds the transpose of the product.
pub fn mmult_tensor(n: usize) -> Tensor3 {
    let m = n * n;
    let mut t = Tensor3::zeros((m, m, m));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                t.set(i * n + j, j * n + k, k * n + i, one());
            }
        }
    }
    t
}

/// Rows indexed by the chosen factor, columns by the remaining two in (A,B,C) order.
pub fn flattening(t: &Tensor3, factor: Factor) -> RationalMatrix {
    let (da, db, dc) = t.dims();
    let (rows, cols) = match factor {
        Factor::A => (da, db * dc),
        Factor::B => (db, da * dc),
        Factor::C => (dc, da * db),
    };
    let mut m = RationalMatrix::zeros(rows, cols);
    for i in 0..da {
        for j in 0..db {
            for k in 0..dc {
                let v = t.get(i, j, k);
                if v.is_zero() {
                    continue;
                }
                let (r, c) = match factor {
                    Factor::A => (i, j * dc + k),
                    Factor::B => (j, i * dc + k),
                    Factor::C => (k, i * db + j),
                };
                m[(r, c)] = v.clone();
            }
        }
    }
    m
}

pub fn multilinear_rank(t: &Tensor3) -> (usize, usize, usize) {
    (
        flattening(t, Factor::A).rank(),
        flattening(t, Factor::B).rank(),
        flattening(t, Factor::C).rank(),
    )
}

/// Plugs a dual vector into one slot. The result is indexed by the remaining two
/// factors in (A,B,C) order.
pub fn contract(t: &Tensor3, dual: &[Q], factor: Factor) -> Result<RationalMatrix, Error> {
    let (da, db, dc) = t.dims();
    let want = match factor {
        Factor::A => da,
        Factor::B => db,
        Factor::C => dc,
    };
    if dual.len() != want {
        return Err(Error::Dimension(format!("dual of length {} for factor of dim {want}", dual.len())));
    }
    let (rows, cols) = match factor {
        Factor::A => (db, dc),
        Factor::B => (da, dc),
        Factor::C => (da, db),
    };
    let mut m = RationalMatrix::zeros(rows, cols);
    for i in 0..da {
        for j in 0..db {
            for k in 0..dc {
                let v = t.get(i, j, k);
                if v.is_zero() {
                    continue;
                }
                let (s, r, c) = match factor {
                    Factor::A => (i, j, k),
                    Factor::B => (j, i, k),
                    Factor::C => (k, i, j),
                };
                if !dual[s].is_zero() {
                    m[(r, c)] += &dual[s] * v;
                }
            }
        }
    }
    Ok(m)
}

pub fn matrix_rank(m: &RationalMatrix) -> usize {
    m.rank()
}

/// The tensor e₁e₁e₂ + e₁e₂e₁ + e₂e₁e₁ in C²⊗C²⊗C².
pub fn w_tensor() -> Tensor3 {
    let mut t = Tensor3::zeros((2, 2, 2));
    t.set(0, 0, 1, one());
    t.set(0, 1, 0, one());
    t.set(1, 0, 0, one());
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mmult_positions_pinned() {
        let t = mmult_tensor(2);
        let mut nz = vec![];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    if !t.get(i, j, k).is_zero() {
                        nz.push((i, j, k));
                    }
                }
            }
        }
        assert_eq!(
            nz,
            vec![(0, 0, 0), (0, 1, 2), (1, 2, 0), (1, 3, 2), (2, 0, 1), (2, 1, 3), (3, 2, 1), (3, 3, 3)]
        );
        assert_eq!(mmult_tensor(1).entries(), &[one()]);
    }

    #[test]
    fn mmult_cyclic() {
        let t = mmult_tensor(2);
        assert_eq!(t.permute_factors([Factor::B, Factor::C, Factor::A]), t);
    }

    #[test]
    fn w_ranks() {
        assert_eq!(multilinear_rank(&w_tensor()), (2, 2, 2));
    }

    #[test]
    fn dims_rejected() {
        let bad = Rank1Term::unit(vec_i64(&[1, 0]), vec_i64(&[1]), vec_i64(&[1, 1]));
        assert!(tensor_from_terms(&[bad], (2, 2, 2)).is_err());
        assert!(contract(&w_tensor(), &vec_i64(&[1, 2, 3]), Factor::B).is_err());
    }
}
