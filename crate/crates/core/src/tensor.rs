//! Dense real N-way tensors and the n-mode product.
//!
//! Layout is row-major with the last index fastest. Modes are numbered from 1
//! so that mode `m` lines up with party `m` of a multipartite state.

use std::ops::{Add, Mul};

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dims("matrix sides must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dims("ragged rows"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Dense real tensor of order N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl RealTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::dims("tensor dims must be non-empty and positive"));
        }
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::dims(format!(
                "{} entries supplied for dims {dims:?}",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product();
        Self { dims, data: vec![0.0; len] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Flat offset of a multi-index (0-based entries).
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        index
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let o = self.offset(index);
        self.data[o] = value;
    }

    /// Squared Frobenius norm: the sum of squares of all entries.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::dims(format!(
                "inner product of {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Mode-`mode` unfolding as a `dims[mode-1] x (rest)` matrix. Columns
    /// enumerate the remaining indices in row-major order.
    pub fn unfold(&self, mode: usize) -> Result<RealMatrix> {
        let m = self.check_mode(mode)?;
        let (outer, len, inner) = split_at_mode(&self.dims, m);
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..len {
            for o in 0..outer {
                let base = (o * len + j) * inner;
                data.extend_from_slice(&self.data[base..base + inner]);
            }
        }
        RealMatrix::new(len, outer * inner, data)
    }

    /// Axis permutation: axis `j` of the result is axis `perm[j]` (1-based)
    /// of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<RealTensor> {
        crate::density::check_permutation(perm, self.order())?;
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p - 1]).collect();
        let old_strides = crate::density::strides(&self.dims);
        let data = (0..self.data.len())
            .map(|flat| {
                let idx = crate::density::unflatten(flat, &dims);
                let src: usize = idx.iter().zip(perm).map(|(&i, &p)| i * old_strides[p - 1]).sum();
                self.data[src]
            })
            .collect();
        Ok(RealTensor { dims, data })
    }

    fn check_mode(&self, mode: usize) -> Result<usize> {
        if mode == 0 || mode > self.dims.len() {
            return Err(Error::ModeOutOfRange { mode, order: self.dims.len() });
        }
        Ok(mode - 1)
    }
}

/// `(product of dims before m, dims[m], product of dims after m)`.
pub(crate) fn split_at_mode(dims: &[usize], m: usize) -> (usize, usize, usize) {
    let outer = dims[..m].iter().product();
    let inner = dims[m + 1..].iter().product();
    (outer, dims[m], inner)
}

/// Contracts index `m` (0-based) of a row-major tensor with the columns of a
/// `rows x dims[m]` row-major matrix. Shared by the real and complex paths.
pub(crate) fn mode_apply<T>(dims: &[usize], data: &[T], m: usize, a: &[T], rows: usize) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Mul<Output = T>,
{
    let (outer, len, inner) = split_at_mode(dims, m);
    debug_assert_eq!(a.len(), rows * len);
    let mut out = vec![T::default(); outer * rows * inner];
    for o in 0..outer {
        for i in 0..rows {
            let dst = (o * rows + i) * inner;
            for j in 0..len {
                let coef = a[i * len + j];
                let src = (o * len + j) * inner;
                for r in 0..inner {
                    out[dst + r] = out[dst + r] + coef * data[src + r];
                }
            }
        }
    }
    out
}

/// n-mode product `t ×_mode a`, with `mode` counted from 1.
///
/// Entry `(j_1 .. i .. j_N)` of the result is `Σ_{j_n} t[j_1 .. j_n .. j_N] a[i, j_n]`.
pub fn n_mode_product(t: &RealTensor, a: &RealMatrix, mode: usize) -> Result<RealTensor> {
    let m = t.check_mode(mode)?;
    if a.cols() != t.dims[m] {
        return Err(Error::dims(format!(
            "matrix has {} columns but mode {mode} has size {}",
            a.cols(),
            t.dims[m]
        )));
    }
    let data = mode_apply(&t.dims, &t.data, m, a.data(), a.rows());
    let mut dims = t.dims.clone();
    dims[m] = a.rows();
    Ok(RealTensor { dims, data })
}

pub fn frobenius_norm_sq(t: &RealTensor) -> f64 {
    t.frobenius_norm_sq()
}
