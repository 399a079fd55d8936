//! Dense covariant tensors of small rank over [`Scalar`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::scalar::Scalar;

/// A dense rank-`rank` array with every slot ranging over `0..dim`.
///
/// Storage is row-major: the first index is the slowest. For a (0,3)
/// tensor the slot order is `(x, y, z)`, for (0,4) `(x, y, z, w)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    rank: usize,
    dim: usize,
    data: Vec<Scalar>,
}

/// Iterator over all multi-indices of a given rank and dimension, in
/// storage order.
#[derive(Debug, Clone)]
pub struct MultiIndex {
    dim: usize,
    current: Vec<usize>,
    done: bool,
}

impl MultiIndex {
    pub fn new(rank: usize, dim: usize) -> Self {
        MultiIndex {
            dim,
            current: vec![0; rank],
            done: dim == 0,
        }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut k = self.current.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.current[k] += 1;
            if self.current[k] < self.dim {
                break;
            }
            self.current[k] = 0;
        }
        Some(out)
    }
}

impl Tensor {
    pub fn zeros(rank: usize, dim: usize) -> Self {
        Tensor {
            rank,
            dim,
            data: vec![Scalar::zero(); dim.pow(rank as u32)],
        }
    }

    pub fn from_fn(rank: usize, dim: usize, mut f: impl FnMut(&[usize]) -> Scalar) -> Self {
        let data = MultiIndex::new(rank, dim).map(|idx| f(&idx)).collect();
        Tensor { rank, dim, data }
    }

    pub fn from_data(rank: usize, dim: usize, data: Vec<Scalar>) -> Result<Self> {
        let want = dim.pow(rank as u32);
        if data.len() != want {
            return Err(Error::ShapeMismatch(format!(
                "rank {rank} dim {dim} needs {want} entries, got {}",
                data.len()
            )));
        }
        Ok(Tensor { rank, dim, data })
    }

    pub fn vector(data: Vec<Scalar>) -> Self {
        Tensor {
            rank: 1,
            dim: data.len(),
            data,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank, "index rank");
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn indices(&self) -> MultiIndex {
        MultiIndex::new(self.rank, self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// First multi-index (in storage order) holding a nonzero entry.
    pub fn first_nonzero(&self) -> Option<Vec<usize>> {
        self.indices()
            .zip(&self.data)
            .find(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        Tensor {
            rank: self.rank,
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    fn check_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.rank != other.rank || self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!(
                "rank {}/dim {} vs rank {}/dim {}",
                self.rank, self.dim, other.rank, other.dim
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    fn zip_with(&self, other: &Tensor, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Tensor {
        Tensor {
            rank: self.rank,
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Substitutes `m(e_i)` into `slot`:
    /// `out(.., i, ..) = Σ_k m[k][i] · self(.., k, ..)`.
    pub fn transform_slot(&self, slot: usize, m: &LinMap) -> Tensor {
        assert!(slot < self.rank, "slot {slot} out of range");
        assert_eq!(m.dim(), self.dim, "map dimension");
        let d = self.dim;
        let stride = d.pow((self.rank - slot - 1) as u32);
        let mut out = vec![Scalar::zero(); self.data.len()];
        for (o, slot_out) in out.iter_mut().enumerate() {
            let i = (o / stride) % d;
            let base = o - i * stride;
            let mut acc = Scalar::zero();
            for k in 0..d {
                let c = m.get(k, i);
                if c.is_zero() {
                    continue;
                }
                let v = &self.data[base + k * stride];
                if !v.is_zero() {
                    acc += c * v;
                }
            }
            *slot_out = acc;
        }
        Tensor {
            rank: self.rank,
            dim: d,
            data: out,
        }
    }

    /// Applies the same substitution to every slot: the covariant transport
    /// of the tensor under a change of basis with matrix `m`.
    pub fn transform_all(&self, m: &LinMap) -> Tensor {
        (0..self.rank).fold(self.clone(), |t, s| t.transform_slot(s, m))
    }

    /// Plugs the vector `v` into `slot`, lowering the rank by one.
    pub fn insert_vector(&self, slot: usize, v: &[Scalar]) -> Tensor {
        assert!(slot < self.rank && v.len() == self.dim);
        let d = self.dim;
        let stride = d.pow((self.rank - slot - 1) as u32);
        let outer = self.data.len() / (stride * d);
        let mut data = Vec::with_capacity(outer * stride);
        for hi in 0..outer {
            for lo in 0..stride {
                let mut acc = Scalar::zero();
                for (k, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let x = &self.data[hi * stride * d + k * stride + lo];
                    if !x.is_zero() {
                        acc += c * x;
                    }
                }
                data.push(acc);
            }
        }
        Tensor {
            rank: self.rank - 1,
            dim: d,
            data,
        }
    }

    /// Reorders slots: `out(i_0, .., i_{r-1}) = self(i_{perm[0]}, .., i_{perm[r-1]})`.
    ///
    /// For a (0,3) tensor `T`, `permute(&[1, 2, 0])` is `(x,y,z) ↦ T(y,z,x)`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.rank);
        let mut src = vec![0; self.rank];
        Tensor::from_fn(self.rank, self.dim, |idx| {
            for (s, &p) in src.iter_mut().zip(perm) {
                *s = idx[p];
            }
            self.get(&src).clone()
        })
    }

    /// Einstein-style contraction of `self` with `other` over the slot pairs
    /// `(slot in self, slot in other)`. The free slots of `self` come first
    /// in the result, followed by the free slots of `other`.
    pub fn contract(&self, other: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!(
                "contracting dim {} with dim {}",
                self.dim, other.dim
            )));
        }
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if a >= self.rank || b >= other.rank {
                return Err(Error::ShapeMismatch(format!(
                    "slot pair ({a},{b}) out of range"
                )));
            }
            if pairs[..k].iter().any(|&(x, y)| x == a || y == b) {
                return Err(Error::ShapeMismatch(format!(
                    "slot pair ({a},{b}) repeated"
                )));
            }
        }
        let free_a: Vec<usize> = (0..self.rank)
            .filter(|s| pairs.iter().all(|p| p.0 != *s))
            .collect();
        let free_b: Vec<usize> = (0..other.rank)
            .filter(|s| pairs.iter().all(|p| p.1 != *s))
            .collect();
        let out_rank = free_a.len() + free_b.len();
        let mut ia = vec![0; self.rank];
        let mut ib = vec![0; other.rank];
        let out = Tensor::from_fn(out_rank, self.dim, |idx| {
            for (k, &s) in free_a.iter().enumerate() {
                ia[s] = idx[k];
            }
            for (k, &s) in free_b.iter().enumerate() {
                ib[s] = idx[free_a.len() + k];
            }
            let mut acc = Scalar::zero();
            for summed in MultiIndex::new(pairs.len(), self.dim) {
                for (&(a, b), &v) in pairs.iter().zip(&summed) {
                    ia[a] = v;
                    ib[b] = v;
                }
                let x = self.get(&ia);
                if x.is_zero() {
                    continue;
                }
                let y = other.get(&ib);
                if !y.is_zero() {
                    acc += x * y;
                }
            }
            acc
        });
        Ok(out)
    }
}

impl<const N: usize> Index<[usize; N]> for Tensor {
    type Output = Scalar;
    fn index(&self, idx: [usize; N]) -> &Scalar {
        assert_eq!(N, self.rank, "index rank");
        self.get(&idx)
    }
}

impl<const N: usize> IndexMut<[usize; N]> for Tensor {
    fn index_mut(&mut self, idx: [usize; N]) -> &mut Scalar {
        assert_eq!(N, self.rank, "index rank");
        let o = self.offset(&idx);
        &mut self.data[o]
    }
}

impl Add for &Tensor {
    type Output = Tensor;
    /// Panics on shape mismatch; see [`Tensor::try_add`].
    fn add(self, rhs: &Tensor) -> Tensor {
        self.check_same_shape(rhs).expect("tensor add");
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        self.check_same_shape(rhs).expect("tensor sub");
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for Tensor {
    type Output = Tensor;
    fn add(self, rhs: Tensor) -> Tensor {
        &self + &rhs
    }
}

impl Sub for Tensor {
    type Output = Tensor;
    fn sub(self, rhs: Tensor) -> Tensor {
        &self - &rhs
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        Tensor {
            rank: self.rank,
            dim: self.dim,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor(rank {}, dim {}) ", self.rank, self.dim)?;
        let nz: Vec<_> = self
            .indices()
            .zip(&self.data)
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| format!("{i:?}={v}"))
            .collect();
        write!(f, "{{{}}}", nz.join(", "))
    }
}
