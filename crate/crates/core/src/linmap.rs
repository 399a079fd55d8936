use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// A square matrix acting on column vectors: the image of basis vector
/// `e_j` is column `j`.
///
/// Also used for the Gram matrix of a bilinear form, in which case entry
/// `(i, j)` is the form evaluated on `(e_i, e_j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinMap {
    dim: usize,
    m: Vec<Scalar>,
}

impl LinMap {
    pub fn zeros(dim: usize) -> Self {
        LinMap {
            dim,
            m: vec![Scalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let d = entries.len();
        Self::from_fn(d, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                m.push(f(i, j));
            }
        }
        LinMap { dim, m }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch(format!(
                "matrix with {dim} rows is not square"
            )));
        }
        Ok(LinMap {
            dim,
            m: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.m
            .chunks(self.dim.max(1))
            .map(<[Scalar]>::to_vec)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i * self.dim + j]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .filter(|&j| !v[j].is_zero())
                    .map(|j| self.get(i, j) * &v[j])
                    .sum()
            })
            .collect()
    }

    /// Row vector times matrix: the 1-form `w ∘ self`.
    pub fn pull_back(&self, w: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(w.len(), self.dim);
        (0..self.dim)
            .map(|j| {
                (0..self.dim)
                    .filter(|&i| !w[i].is_zero())
                    .map(|i| &w[i] * self.get(i, j))
                    .sum()
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        LinMap::from_fn(d, |i, j| {
            (0..d)
                .filter(|&k| !self.get(i, k).is_zero())
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    pub fn transpose(&self) -> LinMap {
        LinMap::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        LinMap::from_fn(self.dim, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        LinMap::from_fn(self.dim, |i, j| self.get(i, j) + other.get(i, j))
    }

    /// The bilinear form `uᵀ · self · v`.
    pub fn form(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mv = self.apply(v);
        u.iter()
            .zip(&mv)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn to_tensor(&self) -> Tensor {
        Tensor::from_data(2, self.dim, self.m.clone()).expect("square")
    }

    pub fn from_tensor(t: &Tensor) -> Result<Self> {
        if t.rank() != 2 {
            return Err(Error::ShapeMismatch(format!(
                "expected rank 2, got {}",
                t.rank()
            )));
        }
        Ok(LinMap {
            dim: t.dim(),
            m: t.data().to_vec(),
        })
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<LinMap> {
        let d = self.dim;
        let mut a = self.rows();
        let mut inv = LinMap::identity(d).rows();
        for c in 0..d {
            let p = (c..d)
                .find(|&r| !a[r][c].is_zero())
                .ok_or(Error::Singular)?;
            a.swap(c, p);
            inv.swap(c, p);
            let pivot = a[c][c].recip().expect("nonzero pivot");
            for v in a[c].iter_mut().chain(inv[c].iter_mut()) {
                *v = &*v * &pivot;
            }
            for r in 0..d {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..d {
                    let s = &f * &a[c][k];
                    a[r][k] -= &s;
                    let s = &f * &inv[c][k];
                    inv[r][k] -= &s;
                }
            }
        }
        LinMap::from_rows(inv)
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}
