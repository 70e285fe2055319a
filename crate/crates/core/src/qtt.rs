//! Quantized tensor-train vectors.
//!
//! A vector of length `d^n` is stored as `n` cores of shape
//! `(r_{k-1}, d, r_k)`. Whether site 1 holds the least or the most
//! significant digit of the vector index is recorded on the MPS. The
//! transform MPOs take least-significant-first input and produce
//! most-significant-first output; [`apply_mpo`] enforces this.

use crate::digits::{checked_pow, digit_reverse_permute, exponent_of, SignificanceOrder};
use crate::error::{arg, Error, Result};
use crate::mpo::Mpo;
use crate::tensor::{contract, matmul, svd_truncate, ComplexTensor, Truncation, C64};

pub use crate::digits::{digits_to_index, index_to_digits, BitString};

/// Largest vector `mps_to_dense` will materialize.
pub const DENSE_VECTOR_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct Mps {
    n: usize,
    d: usize,
    order: SignificanceOrder,
    cores: Vec<ComplexTensor>,
}

impl Mps {
    pub fn new(d: usize, order: SignificanceOrder, cores: Vec<ComplexTensor>) -> Result<Self> {
        if cores.is_empty() {
            return arg("an MPS needs at least one site");
        }
        let mut left = 1;
        for (k, core) in cores.iter().enumerate() {
            let s = core.shape();
            if s.len() != 3 || s[0] != left || s[1] != d {
                return arg(format!(
                    "core {k} has shape {s:?}, expected [{left}, {d}, _]"
                ));
            }
            left = s[2];
        }
        if left != 1 {
            return arg(format!("last core has right bond {left}, expected 1"));
        }
        Ok(Self {
            n: cores.len(),
            d,
            order,
            cores,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> SignificanceOrder {
        self.order
    }

    pub fn cores(&self) -> &[ComplexTensor] {
        &self.cores
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.cores[..self.n - 1]
            .iter()
            .map(|c| c.shape()[2])
            .collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// The same state multiplied by `factor`, folded into the last core.
    pub fn scaled(mut self, factor: C64) -> Self {
        let last = self.cores.len() - 1;
        self.cores[last] = self.cores[last].scale(factor);
        self
    }
}

/// TT-SVD of a dense vector of length `d^n`, `n >= 1`.
///
/// Each of the `n - 1` bonds is truncated with relative tolerance
/// `tol / sqrt(n - 1)`, so the 2-norm reconstruction error is at most
/// `tol * ||v||`.
pub fn dense_to_mps(v: &[C64], d: usize, order: SignificanceOrder, tol: f64) -> Result<Mps> {
    let n = exponent_of(v.len(), d)?;
    if n == 0 {
        return arg("vector must have at least d entries");
    }
    if tol.is_nan() || tol < 0.0 {
        return arg(format!("tolerance must be nonnegative, got {tol}"));
    }
    // site k of the row-major tensor carries digit k of the chosen order
    let data = match order {
        SignificanceOrder::MsbFirst => v.to_vec(),
        SignificanceOrder::LsbFirst => digit_reverse_permute(v, d)?,
    };
    let local_tol = if n > 1 {
        tol / ((n - 1) as f64).sqrt()
    } else {
        tol
    };

    let mut cores = Vec::with_capacity(n);
    let mut rest = ComplexTensor::new(vec![d, v.len() / d], data)?;
    let mut left = 1;
    for _ in 0..n - 1 {
        let svd = svd_truncate(&rest, Truncation::Tolerance(local_tol))?;
        let r = svd.rank();
        cores.push(svd.u.reshape(&[left, d, r])?);
        let mut sv = svd.v;
        let cols = sv.cols();
        for (row, &s) in sv.data_mut().chunks_mut(cols).zip(&svd.s) {
            row.iter_mut().for_each(|z| *z *= s);
        }
        left = r;
        rest = sv.reshape(&[left * d, cols / d])?;
    }
    cores.push(rest.reshape(&[left, d, 1])?);
    Mps::new(d, order, cores)
}

/// Dense vector in natural index order, honoring the significance order.
pub fn mps_to_dense(m: &Mps) -> Result<Vec<C64>> {
    let size = checked_pow(m.d, m.n)
        .filter(|&s| s <= DENSE_VECTOR_LIMIT)
        .ok_or(Error::SizeGuard {
            requested: (m.d as u128).saturating_pow(m.n.min(128) as u32),
            limit: DENSE_VECTOR_LIMIT as u128,
        })?;
    let mut acc = m.cores[0].clone().reshape(&[m.d, m.cores[0].shape()[2]])?;
    for core in &m.cores[1..] {
        let s = core.shape();
        let rows = acc.rows();
        let next = matmul(&acc, &core.clone().reshape(&[s[0], s[1] * s[2]])?)?;
        acc = next.reshape(&[rows * s[1], s[2]])?;
    }
    debug_assert_eq!(acc.len(), size);
    let flat = acc.into_data();
    match m.order {
        SignificanceOrder::MsbFirst => Ok(flat),
        SignificanceOrder::LsbFirst => digit_reverse_permute(&flat, m.d),
    }
}

/// Applies a transform MPO to a least-significant-first MPS.
///
/// The exact product has bond dimension `r_op · r_v`; with `tol > 0` it is
/// then rounded to relative accuracy `tol`. The result is
/// most-significant-first.
pub fn apply_mpo(op: &Mpo, v: &Mps, tol: f64) -> Result<Mps> {
    if v.order != SignificanceOrder::LsbFirst {
        return Err(Error::Convention {
            expected: SignificanceOrder::LsbFirst,
            found: v.order,
        });
    }
    if op.n() != v.n || op.d() != v.d {
        return arg(format!(
            "operator has {} sites of dimension {}, vector has {} of dimension {}",
            op.n(),
            op.d(),
            v.n,
            v.d
        ));
    }
    if tol.is_nan() || tol < 0.0 {
        return arg(format!("tolerance must be nonnegative, got {tol}"));
    }
    let d = v.d;
    let mut cores = Vec::with_capacity(v.n);
    for (a, b) in op.cores().iter().zip(&v.cores) {
        let (la, ra) = (a.shape()[0], a.shape()[3]);
        let (lb, rb) = (b.shape()[0], b.shape()[2]);
        // (α, σ, β, a, b) -> (α, a, σ, β, b)
        let c = contract(a, b, &[(2, 1)])?.permute(&[0, 3, 1, 2, 4])?;
        cores.push(c.reshape(&[la * lb, d, ra * rb])?);
    }
    let out = Mps::new(d, SignificanceOrder::MsbFirst, cores)?;
    if tol > 0.0 {
        round(&out, tol)
    } else {
        Ok(out)
    }
}

/// TT rounding: right-to-left orthogonalization followed by a truncating
/// left-to-right SVD sweep with per-bond tolerance `tol / sqrt(n - 1)`.
pub fn round(m: &Mps, tol: f64) -> Result<Mps> {
    if tol.is_nan() || tol < 0.0 {
        return arg(format!("tolerance must be nonnegative, got {tol}"));
    }
    let n = m.n;
    if n == 1 {
        return Ok(m.clone());
    }
    let d = m.d;
    let mut cores = m.cores.clone();

    for k in (1..n).rev() {
        let s = cores[k].shape().to_vec();
        let mat = cores[k].clone().reshape(&[s[0], s[1] * s[2]])?;
        let svd = svd_truncate(&mat, Truncation::Rank(usize::MAX))?;
        let r = svd.rank();
        cores[k] = svd.v.reshape(&[r, s[1], s[2]])?;
        let mut us = svd.u;
        for row in us.data_mut().chunks_mut(r) {
            row.iter_mut().zip(&svd.s).for_each(|(z, &sv)| *z *= sv);
        }
        let p = cores[k - 1].shape().to_vec();
        let prev = cores[k - 1].clone().reshape(&[p[0] * p[1], p[2]])?;
        cores[k - 1] = matmul(&prev, &us)?.reshape(&[p[0], p[1], r])?;
    }

    let local_tol = tol / ((n - 1) as f64).sqrt();
    for k in 0..n - 1 {
        let s = cores[k].shape().to_vec();
        let mat = cores[k].clone().reshape(&[s[0] * s[1], s[2]])?;
        let svd = svd_truncate(&mat, Truncation::Tolerance(local_tol))?;
        let r = svd.rank();
        cores[k] = svd.u.reshape(&[s[0], s[1], r])?;
        let mut sv = svd.v;
        let cols = sv.cols();
        for (row, &x) in sv.data_mut().chunks_mut(cols).zip(&svd.s) {
            row.iter_mut().for_each(|z| *z *= x);
        }
        let q = cores[k + 1].shape().to_vec();
        let next = cores[k + 1].clone().reshape(&[q[0], q[1] * q[2]])?;
        cores[k + 1] = matmul(&sv, &next)?.reshape(&[r, q[1], q[2]])?;
    }
    debug_assert!(cores.iter().all(|c| c.shape()[1] == d));
    Mps::new(d, m.order, cores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn norm(v: &[C64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn pseudo_random(len: usize, seed: u64) -> Vec<C64> {
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        (0..len).map(|_| C64::new(next(), next())).collect()
    }

    #[test]
    fn delta_and_plane_wave_are_rank_one() {
        let mut e0 = vec![C64::new(0.0, 0.0); 256];
        e0[0] = C64::new(1.0, 0.0);
        for order in [SignificanceOrder::LsbFirst, SignificanceOrder::MsbFirst] {
            let m = dense_to_mps(&e0, 2, order, 1e-12).unwrap();
            assert_eq!(m.max_bond(), 1);
            assert!(diff(&mps_to_dense(&m).unwrap(), &e0) < 1e-14);
        }
        let wave: Vec<C64> = (0..256)
            .map(|t| C64::from_polar(1.0, 2.0 * PI * 5.0 * t as f64 / 256.0))
            .collect();
        let m = dense_to_mps(&wave, 2, SignificanceOrder::LsbFirst, 1e-12).unwrap();
        assert_eq!(m.max_bond(), 1);
        assert!(diff(&mps_to_dense(&m).unwrap(), &wave) < 1e-12);
    }

    #[test]
    fn random_round_trip() {
        let v = pseudo_random(256, 42);
        let m = dense_to_mps(&v, 2, SignificanceOrder::LsbFirst, 1e-10).unwrap();
        assert!(diff(&mps_to_dense(&m).unwrap(), &v) <= 1e-9);
        let v3 = pseudo_random(81, 7);
        let m3 = dense_to_mps(&v3, 3, SignificanceOrder::MsbFirst, 0.0).unwrap();
        assert!(diff(&mps_to_dense(&m3).unwrap(), &v3) <= 1e-12);
    }

    #[test]
    fn single_site() {
        let v = vec![C64::new(1.5, 0.0), C64::new(0.0, -2.0)];
        let m = dense_to_mps(&v, 2, SignificanceOrder::LsbFirst, 0.0).unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(mps_to_dense(&m).unwrap(), v);
    }

    #[test]
    fn truncation_respects_tolerance() {
        let v = pseudo_random(1024, 3);
        for tol in [1e-1, 1e-2, 0.3] {
            let m = dense_to_mps(&v, 2, SignificanceOrder::LsbFirst, tol).unwrap();
            assert!(diff(&mps_to_dense(&m).unwrap(), &v) <= tol * norm(&v) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(dense_to_mps(&pseudo_random(12, 1), 2, SignificanceOrder::LsbFirst, 0.0).is_err());
        assert!(dense_to_mps(&pseudo_random(1, 1), 2, SignificanceOrder::LsbFirst, 0.0).is_err());
    }

    /// Block MPS of `a + b` (bond dimensions add).
    fn sum(a: &Mps, b: &Mps) -> Mps {
        let n = a.n();
        let cores = (0..n)
            .map(|k| {
                let (x, y) = (&a.cores()[k], &b.cores()[k]);
                let (xs, ys) = (x.shape(), y.shape());
                let l = if k == 0 { 1 } else { xs[0] + ys[0] };
                let r = if k == n - 1 { 1 } else { xs[2] + ys[2] };
                ComplexTensor::from_fn(&[l, xs[1], r], |i| {
                    let (li, p, ri) = (i[0], i[1], i[2]);
                    let in_x = (k == 0 || li < xs[0]) && (k == n - 1 || ri < xs[2]);
                    let in_y = (k == 0 || li >= xs[0]) && (k == n - 1 || ri >= xs[2]);
                    let ly = if k == 0 { 0 } else { li.wrapping_sub(xs[0]) };
                    let ry = if k == n - 1 {
                        0
                    } else {
                        ri.wrapping_sub(xs[2])
                    };
                    let mut z = C64::new(0.0, 0.0);
                    if in_x {
                        z += x.get(&[li, p, ri]);
                    }
                    if in_y {
                        z += y.get(&[ly, p, ry]);
                    }
                    z
                })
            })
            .collect();
        Mps::new(a.d(), a.order(), cores).unwrap()
    }

    #[test]
    fn rounding_compresses_redundant_bonds() {
        let v = pseudo_random(64, 9);
        let m = dense_to_mps(&v, 2, SignificanceOrder::MsbFirst, 0.0).unwrap();
        let doubled = sum(&m, &m);
        assert_eq!(doubled.max_bond(), 2 * m.max_bond());
        let twice: Vec<C64> = v.iter().map(|z| z * 2.0).collect();
        assert!(diff(&mps_to_dense(&doubled).unwrap(), &twice) <= 1e-12 * norm(&twice));
        let rounded = round(&doubled, 1e-12).unwrap();
        assert_eq!(rounded.bond_dims(), m.bond_dims());
        assert!(diff(&mps_to_dense(&rounded).unwrap(), &twice) <= 1e-10 * norm(&twice));
    }
}
