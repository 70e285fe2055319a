//! Dense complex tensors stored row-major (last index fastest).
//!
//! Contraction is done by permuting both operands so that the contracted
//! axes are adjacent, reshaping to matrices and multiplying.

use std::ops::Index;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{arg, Error, Result};

pub type C64 = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTensor {
    shape: Vec<usize>,
    data: Vec<C64>,
}

fn check_shape(shape: &[usize]) -> Result<usize> {
    if let Some(axis) = shape.iter().position(|&e| e == 0) {
        return arg(format!("axis {axis} has zero extent"));
    }
    shape
        .iter()
        .try_fold(1usize, |acc, &e| acc.checked_mul(e))
        .ok_or_else(|| Error::Argument(format!("shape {shape:?} overflows usize")))
}

fn row_major_strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    strides
}

impl ComplexTensor {
    pub fn new(shape: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        let len = check_shape(&shape)?;
        if len != data.len() {
            return arg(format!(
                "shape {shape:?} needs {len} entries, got {}",
                data.len()
            ));
        }
        Ok(Self { shape, data })
    }

    /// Panics if any extent is zero.
    pub fn zeros(shape: &[usize]) -> Self {
        let len = check_shape(shape).expect("invalid tensor shape");
        Self {
            shape: shape.to_vec(),
            data: vec![C64::new(0.0, 0.0); len],
        }
    }

    /// Builds a tensor by evaluating `f` at every multi-index in row-major order.
    /// Panics if any extent is zero.
    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> C64) -> Self {
        let len = check_shape(shape).expect("invalid tensor shape");
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..len {
            data.push(f(&idx));
            for ax in (0..shape.len()).rev() {
                idx[ax] += 1;
                if idx[ax] < shape[ax] {
                    break;
                }
                idx[ax] = 0;
            }
        }
        Self {
            shape: shape.to_vec(),
            data,
        }
    }

    pub fn matrix(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        Self::new(vec![rows, cols], data)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(&[n, n], |i| {
            if i[0] == i[1] {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn strides(&self) -> Vec<usize> {
        row_major_strides(&self.shape)
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        let mut off = 0;
        for (i, (&x, &e)) in index.iter().zip(&self.shape).enumerate() {
            assert!(x < e, "index {x} out of range for axis {i} of extent {e}");
            off = off * e + x;
        }
        off
    }

    pub fn get(&self, index: &[usize]) -> C64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: C64) {
        let off = self.offset(index);
        self.data[off] = value;
    }

    pub fn rows(&self) -> usize {
        self.shape[0]
    }

    pub fn cols(&self) -> usize {
        self.shape[1]
    }

    pub fn reshape(self, shape: &[usize]) -> Result<Self> {
        let len = check_shape(shape)?;
        if len != self.data.len() {
            return arg(format!("cannot reshape {:?} into {shape:?}", self.shape));
        }
        Ok(Self {
            shape: shape.to_vec(),
            data: self.data,
        })
    }

    /// Reorders axes so that output axis `i` is input axis `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        validate_perm(perm, self.rank())?;
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(self.clone());
        }
        let in_strides = self.strides();
        let out_shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let src_strides: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; out_shape.len()];
        let mut src = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[src]);
            for ax in (0..out_shape.len()).rev() {
                idx[ax] += 1;
                src += src_strides[ax];
                if idx[ax] < out_shape[ax] {
                    break;
                }
                src -= src_strides[ax] * out_shape[ax];
                idx[ax] = 0;
            }
        }
        Ok(Self {
            shape: out_shape,
            data,
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.shape != other.shape {
            return arg(format!(
                "shape mismatch: {:?} vs {:?}",
                self.shape, other.shape
            ));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn conj_transpose(&self) -> Result<Self> {
        if self.rank() != 2 {
            return arg("conjugate transpose needs a matrix");
        }
        let mut t = self.permute(&[1, 0])?;
        t.data.iter_mut().for_each(|z| *z = z.conj());
        Ok(t)
    }
}

impl Index<&[usize]> for ComplexTensor {
    type Output = C64;

    fn index(&self, index: &[usize]) -> &C64 {
        &self.data[self.offset(index)]
    }
}

fn validate_perm(perm: &[usize], rank: usize) -> Result<()> {
    if perm.len() != rank {
        return arg(format!(
            "permutation {perm:?} has length {} for a rank-{rank} tensor",
            perm.len()
        ));
    }
    let mut seen = vec![false; rank];
    for &p in perm {
        if p >= rank || seen[p] {
            return arg(format!("{perm:?} is not a permutation of 0..{rank}"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Plain matrix product of two rank-2 tensors.
pub fn matmul(a: &ComplexTensor, b: &ComplexTensor) -> Result<ComplexTensor> {
    if a.rank() != 2 || b.rank() != 2 {
        return arg("matmul needs two matrices");
    }
    let (m, k) = (a.shape[0], a.shape[1]);
    let (k2, n) = (b.shape[0], b.shape[1]);
    if k != k2 {
        return Err(Error::Dimension {
            left: 1,
            right: 0,
            left_extent: k,
            right_extent: k2,
        });
    }
    let mut out = vec![C64::new(0.0, 0.0); m * n];
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        for p in 0..k {
            let aip = a.data[i * k + p];
            if aip == C64::new(0.0, 0.0) {
                continue;
            }
            let brow = &b.data[p * n..(p + 1) * n];
            for (o, &bv) in row.iter_mut().zip(brow) {
                *o += aip * bv;
            }
        }
    }
    ComplexTensor::new(vec![m, n], out)
}

/// Contracts `a` and `b` over the given `(axis of a, axis of b)` pairs.
///
/// The result carries the surviving axes of `a` in order, followed by the
/// surviving axes of `b`. With no pairs this is the outer product.
pub fn contract(
    a: &ComplexTensor,
    b: &ComplexTensor,
    axes: &[(usize, usize)],
) -> Result<ComplexTensor> {
    let mut used_a = vec![false; a.rank()];
    let mut used_b = vec![false; b.rank()];
    for &(i, j) in axes {
        if i >= a.rank() || j >= b.rank() {
            return arg(format!("axis pair ({i}, {j}) out of range"));
        }
        if used_a[i] || used_b[j] {
            return arg(format!("axis pair ({i}, {j}) repeats an axis"));
        }
        used_a[i] = true;
        used_b[j] = true;
        if a.shape[i] != b.shape[j] {
            return Err(Error::Dimension {
                left: i,
                right: j,
                left_extent: a.shape[i],
                right_extent: b.shape[j],
            });
        }
    }
    let free_a: Vec<usize> = (0..a.rank()).filter(|&i| !used_a[i]).collect();
    let free_b: Vec<usize> = (0..b.rank()).filter(|&j| !used_b[j]).collect();

    let perm_a: Vec<usize> = free_a
        .iter()
        .copied()
        .chain(axes.iter().map(|p| p.0))
        .collect();
    let perm_b: Vec<usize> = axes
        .iter()
        .map(|p| p.1)
        .chain(free_b.iter().copied())
        .collect();

    let rows: usize = free_a.iter().map(|&i| a.shape[i]).product();
    let inner: usize = axes.iter().map(|p| a.shape[p.0]).product();
    let cols: usize = free_b.iter().map(|&j| b.shape[j]).product();

    let am = a.permute(&perm_a)?.reshape(&[rows, inner])?;
    let bm = b.permute(&perm_b)?.reshape(&[inner, cols])?;
    let prod = matmul(&am, &bm)?;

    let out_shape: Vec<usize> = free_a
        .iter()
        .map(|&i| a.shape[i])
        .chain(free_b.iter().map(|&j| b.shape[j]))
        .collect();
    Ok(ComplexTensor {
        shape: out_shape,
        data: prod.data,
    })
}

/// Permutes `t` by `perm` and groups the first `row_axes` axes into rows.
pub fn matricize(t: &ComplexTensor, row_axes: usize, perm: &[usize]) -> Result<ComplexTensor> {
    if row_axes == 0 || row_axes >= t.rank() {
        return arg(format!(
            "row group of {row_axes} axes is invalid for a rank-{} tensor",
            t.rank()
        ));
    }
    let p = t.permute(perm)?;
    let rows: usize = p.shape[..row_axes].iter().product();
    let cols: usize = p.shape[row_axes..].iter().product();
    p.reshape(&[rows, cols])
}

/// The `m`-th unfolding of a tensor whose (permuted) axes come in `n`
/// consecutive pairs `(σ_1, τ_1, …, σ_n, τ_n)`: rows are the first `m`
/// pairs, columns the remaining ones. Requires `0 < m < n`.
pub fn unfold(t: &ComplexTensor, m: usize, perm: &[usize]) -> Result<ComplexTensor> {
    if !t.rank().is_multiple_of(2) {
        return arg("paired unfolding needs an even number of axes");
    }
    let n = t.rank() / 2;
    if m == 0 || m >= n {
        return arg(format!("split {m} must satisfy 0 < m < {n}"));
    }
    matricize(t, 2 * m, perm)
}

/// Inverse of [`unfold`]/[`matricize`]: restores a tensor of `shape` from
/// its matricization under `perm`.
pub fn fold(matrix: &ComplexTensor, shape: &[usize], perm: &[usize]) -> Result<ComplexTensor> {
    validate_perm(perm, shape.len())?;
    let permuted_shape: Vec<usize> = perm.iter().map(|&p| shape[p]).collect();
    let p = matrix.clone().reshape(&permuted_shape)?;
    let mut inverse = vec![0; perm.len()];
    for (i, &q) in perm.iter().enumerate() {
        inverse[q] = i;
    }
    p.permute(&inverse)
}

/// Largest entry modulus; zero for an all-zero tensor.
pub fn max_abs(t: &ComplexTensor) -> f64 {
    t.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// Keep at most this many singular triplets.
    Rank(usize),
    /// Keep the fewest triplets whose discarded weight is at most
    /// `tol * ||m||_F`.
    Tolerance(f64),
}

#[derive(Clone, Debug)]
pub struct TruncatedSvd {
    /// rows × r, orthonormal columns.
    pub u: ComplexTensor,
    /// Nonincreasing, length r.
    pub s: Vec<f64>,
    /// r × cols, orthonormal rows (the adjoint of the right singular vectors).
    pub v: ComplexTensor,
    /// Frobenius norm of the dropped part of the spectrum.
    pub discarded_weight: f64,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `U · diag(S) · V`.
    pub fn reconstruct(&self) -> Result<ComplexTensor> {
        let r = self.rank();
        let mut us = self.u.clone();
        let cols = us.shape[1];
        for row in us.data.chunks_mut(cols) {
            for (z, &s) in row.iter_mut().zip(&self.s[..r]) {
                *z *= s;
            }
        }
        matmul(&us, &self.v)
    }
}

/// Singular value decomposition truncated by rank or by relative tolerance.
///
/// Singular values are sorted nonincreasing with a stable sort, so equal
/// values at the cut keep the earlier index. An all-zero matrix yields rank
/// one with `S = [0]`.
pub fn svd_truncate(m: &ComplexTensor, truncation: Truncation) -> Result<TruncatedSvd> {
    if m.rank() != 2 {
        return arg("svd_truncate needs a matrix");
    }
    match truncation {
        Truncation::Rank(0) => return arg("truncation rank must be positive"),
        Truncation::Tolerance(t) if t.is_nan() || t < 0.0 => {
            return arg(format!("tolerance must be nonnegative, got {t}"))
        }
        _ => {}
    }
    let (rows, cols) = (m.shape[0], m.shape[1]);
    let dense = Mat::<C64>::from_fn(rows, cols, |i, j| m.data[i * cols + j]);
    let svd = dense
        .thin_svd()
        .map_err(|e| Error::Argument(format!("SVD did not converge: {e:?}")))?;
    let (u_full, v_full) = (svd.U(), svd.V());
    let sv: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| {
        sv[j]
            .partial_cmp(&sv[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sorted: Vec<f64> = order.iter().map(|&i| sv[i].max(0.0)).collect();

    // tail[r] = sqrt(sum_{i >= r} s_i^2), accumulated from the small end
    let mut tail = vec![0.0f64; sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        tail[i] = (tail[i + 1].powi(2) + sorted[i].powi(2)).sqrt();
    }
    let total = tail[0];

    let keep = match truncation {
        Truncation::Rank(r) => r.min(sorted.len()),
        Truncation::Tolerance(tol) => {
            let limit = tol * total;
            (1..=sorted.len())
                .find(|&r| tail[r] <= limit)
                .unwrap_or(sorted.len())
        }
    }
    .max(1);

    let u = ComplexTensor::from_fn(&[rows, keep], |ix| u_full[(ix[0], order[ix[1]])]);
    let v = ComplexTensor::from_fn(&[keep, cols], |ix| v_full[(ix[1], order[ix[0]])].conj());
    Ok(TruncatedSvd {
        u,
        s: sorted[..keep].to_vec(),
        v,
        discarded_weight: tail[keep],
    })
}
