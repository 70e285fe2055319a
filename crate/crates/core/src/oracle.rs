//! Reference DFTs used to check the constructions: a dense matrix, a
//! radix-2 FFT and the dyadic block identity of the DFT matrix.

use std::f64::consts::PI;

use crate::cheb::ek_bound;
use crate::digits::checked_pow;
use crate::error::{arg, Error, Result};
use crate::tensor::{matmul, svd_truncate, ComplexTensor, Truncation, C64};

/// Largest dense DFT side length.
pub const DENSE_DFT_LIMIT: usize = 1 << 12;

fn root_of_unity(num: u128, size: u128) -> C64 {
    let r = num % size;
    if (4 * r).is_multiple_of(size) {
        return match 4 * r / size {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 1.0),
        };
    }
    C64::from_polar(1.0, -2.0 * PI * (r as f64 / size as f64))
}

/// `F[s, t] = e^{-2πi st / N}` with `N = d^n`.
pub fn dense_dft(n: usize, d: usize) -> Result<ComplexTensor> {
    if d < 2 {
        return arg(format!("digit base must be at least 2, got {d}"));
    }
    let size = checked_pow(d, n)
        .filter(|&s| s <= DENSE_DFT_LIMIT)
        .ok_or(Error::SizeGuard {
            requested: (d as u128).saturating_pow(n.min(128) as u32),
            limit: DENSE_DFT_LIMIT as u128,
        })?;
    Ok(dft_matrix(size))
}

fn dft_matrix(size: usize) -> ComplexTensor {
    ComplexTensor::from_fn(&[size, size], |i| {
        root_of_unity(i[0] as u128 * i[1] as u128, size as u128)
    })
}

/// `Σ_t e^{-2πi st/N} v_t`, straight from the definition in `O(N²)`.
pub fn naive_dft(v: &[C64]) -> Vec<C64> {
    let size = v.len() as u128;
    (0..v.len())
        .map(|s| {
            v.iter()
                .enumerate()
                .map(|(t, &x)| x * root_of_unity(s as u128 * t as u128, size))
                .sum()
        })
        .collect()
}

/// Iterative radix-2 decimation-in-time FFT with the `e^{-2πi st/N}` sign.
pub fn fft(v: &[C64]) -> Result<Vec<C64>> {
    let len = v.len();
    if len == 0 || !len.is_power_of_two() {
        return arg(format!("FFT length {len} is not a power of two"));
    }
    let bits = len.trailing_zeros();
    let mut out = vec![C64::new(0.0, 0.0); len];
    for (i, &x) in v.iter().enumerate() {
        let j = if bits == 0 {
            0
        } else {
            i.reverse_bits() >> (usize::BITS - bits)
        };
        out[j] = x;
    }
    let twiddles: Vec<C64> = (0..len / 2)
        .map(|k| root_of_unity(k as u128, len as u128))
        .collect();
    let mut half = 1;
    while half < len {
        let stride = len / (2 * half);
        for start in (0..len).step_by(2 * half) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = out[start + k];
                let b = out[start + k + half] * w;
                out[start + k] = a + b;
                out[start + k + half] = a - b;
            }
        }
        half *= 2;
    }
    Ok(out)
}

/// One block `(i, j)` of the level-`l` partition.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockResult {
    /// Row-block index in `0..2^l`.
    pub i: usize,
    /// Column-block index in `0..2^{n-l}`.
    pub j: usize,
    /// `max |F_{i,j} - D_j F_{0,0} D_i|`.
    pub residual: f64,
    /// Singular values above the threshold, when a `K` was supplied.
    pub numerical_rank: Option<usize>,
    /// Spectral error of the best rank-`(K+1)` approximation.
    pub truncated_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub n: usize,
    pub l: usize,
    /// `ek_bound(K)` when a `K` was supplied.
    pub rank_threshold: Option<f64>,
    pub max_residual: f64,
    pub max_numerical_rank: Option<usize>,
    pub blocks: Vec<BlockResult>,
}

/// Checks `F_{i,j} = D_j F_{0,0} D_i` on the level-`l` partition of the
/// `2^n`-point DFT into `2^l × 2^{n-l}` blocks of size `2^{n-l} × 2^l`.
///
/// `i` indexes row blocks and `j` column blocks. `D_j` (left, size
/// `2^{n-l}`) is the diagonal of column `j` of the `2^{n-l}`-point DFT and
/// `D_i` (right, size `2^l`) the diagonal of column `i` of the `2^l`-point
/// DFT. With `k` given, every block is also tested for numerical rank at
/// threshold `ek_bound(k)`.
pub fn block_identity_check(n: usize, l: usize, k: Option<usize>) -> Result<BlockReport> {
    if l > n {
        return arg(format!("level {l} must be at most n = {n}"));
    }
    let full = dense_dft(n, 2)?;
    let size = full.rows();
    let threshold = k.map(ek_bound).transpose()?;

    let (row_blocks, col_blocks) = (1usize << l, 1usize << (n - l));
    let (height, width) = (size / row_blocks, size / col_blocks);
    debug_assert_eq!((height, width), (col_blocks, row_blocks));

    let block = |i: usize, j: usize| {
        ComplexTensor::from_fn(&[height, width], |x| {
            full.get(&[i * height + x[0], j * width + x[1]])
        })
    };
    let base = block(0, 0);
    let small = dft_matrix(row_blocks);
    let large = dft_matrix(col_blocks);

    let mut blocks = Vec::with_capacity(row_blocks * col_blocks);
    for i in 0..row_blocks {
        for j in 0..col_blocks {
            let left = diag(&large, j);
            let right = diag(&small, i);
            let predicted = matmul(&matmul(&left, &base)?, &right)?;
            let actual = block(i, j);
            let residual = actual.max_abs_diff(&predicted)?;
            let (numerical_rank, truncated_residual) = match (k, threshold) {
                (Some(k), Some(th)) => {
                    let svd = svd_truncate(&actual, Truncation::Rank(usize::MAX))?;
                    let rank = svd.s.iter().filter(|&&s| s > th).count();
                    let tail = svd.s.get(k + 1).copied().unwrap_or(0.0);
                    (Some(rank), Some(tail))
                }
                _ => (None, None),
            };
            blocks.push(BlockResult {
                i,
                j,
                residual,
                numerical_rank,
                truncated_residual,
            });
        }
    }
    Ok(BlockReport {
        n,
        l,
        rank_threshold: threshold,
        max_residual: blocks.iter().map(|b| b.residual).fold(0.0, f64::max),
        max_numerical_rank: blocks.iter().filter_map(|b| b.numerical_rank).max(),
        blocks,
    })
}

/// Diagonal matrix built from column `col` of `m`.
fn diag(m: &ComplexTensor, col: usize) -> ComplexTensor {
    let size = m.rows();
    ComplexTensor::from_fn(&[size, size], |x| {
        if x[0] == x[1] {
            m.get(&[x[0], col])
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random(len: usize, seed: u64) -> Vec<C64> {
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        (0..len).map(|_| C64::new(next(), next())).collect()
    }

    fn rel_err(a: &[C64], b: &[C64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn small_dense_dft() {
        let f = dense_dft(1, 2).unwrap();
        assert_eq!(
            f.data(),
            &[
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(-1.0, 0.0)
            ]
        );
        let f2 = dense_dft(2, 2).unwrap();
        assert!((f2.get(&[1, 1]) - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(dense_dft(13, 2).is_err());
    }

    #[test]
    fn dense_dft_is_scaled_unitary() {
        let f = dense_dft(6, 2).unwrap();
        let g = matmul(&f, &f.conj_transpose().unwrap())
            .unwrap()
            .scale(C64::new(1.0 / 64.0, 0.0));
        assert!(g.max_abs_diff(&ComplexTensor::identity(64)).unwrap() < 1e-12);
    }

    #[test]
    fn fft_examples() {
        let mut e0 = vec![C64::new(0.0, 0.0); 16];
        e0[0] = C64::new(1.0, 0.0);
        assert!(fft(&e0).unwrap().iter().all(|z| (z - 1.0).norm() < 1e-15));
        let ones = vec![C64::new(1.0, 0.0); 16];
        let f = fft(&ones).unwrap();
        assert!((f[0] - 16.0).norm() < 1e-13);
        assert!(f[1..].iter().all(|z| z.norm() < 1e-13));
        assert!(fft(&ones[..12]).is_err());
        assert_eq!(fft(&ones[..1]).unwrap(), vec![C64::new(1.0, 0.0)]);
    }

    #[test]
    fn fft_matches_naive_sum() {
        let v = pseudo_random(1024, 11);
        assert!(rel_err(&fft(&v).unwrap(), &naive_dft(&v)) < 1e-9);
        for seed in 0..100u64 {
            let n = (seed % 10 + 1) as usize;
            let v = pseudo_random(1 << n, seed);
            let f = dense_dft(n, 2).unwrap();
            let col = ComplexTensor::new(vec![1 << n, 1], v.clone()).unwrap();
            let want = matmul(&f, &col).unwrap().into_data();
            assert!(rel_err(&fft(&v).unwrap(), &want) < 1e-9);
        }
    }

    #[test]
    fn block_identity_small_levels() {
        for n in 1..=5 {
            for l in 0..=n {
                let report = block_identity_check(n, l, None).unwrap();
                assert_eq!(report.blocks.len(), 1 << n);
                assert!(report.max_residual <= 1e-11, "n={n} l={l}");
            }
        }
        let r = block_identity_check(3, 2, None).unwrap();
        assert_eq!(r.blocks.len(), 8);
        assert!(r.max_residual <= 1e-12);
        assert!(block_identity_check(3, 4, None).is_err());
    }

    #[test]
    fn single_block_levels_are_trivial() {
        for l in [0, 4] {
            let r = block_identity_check(4, l, None).unwrap();
            let b = &r.blocks[0];
            assert_eq!((b.i, b.j), (0, 0));
            assert_eq!(b.residual, 0.0);
        }
    }

    #[test]
    fn swapped_diagonals_do_not_satisfy_the_identity() {
        // n = 2, l = 1: both diagonals have size 2, so the swap is well-formed
        let full = dense_dft(2, 2).unwrap();
        let block = |i: usize, j: usize| {
            ComplexTensor::from_fn(&[2, 2], |x| full.get(&[i * 2 + x[0], j * 2 + x[1]]))
        };
        let small = dft_matrix(2);
        let swapped = matmul(
            &matmul(&diag(&small, 0), &block(0, 0)).unwrap(),
            &diag(&small, 1),
        )
        .unwrap();
        assert!(block(0, 1).max_abs_diff(&swapped).unwrap() > 0.5);
    }

    #[test]
    fn block_ranks_with_threshold() {
        let r = block_identity_check(6, 3, Some(8)).unwrap();
        let bound = ek_bound(8).unwrap() * 8.0;
        for b in &r.blocks {
            assert!(b.truncated_residual.unwrap() <= bound);
            assert!(b.numerical_rank.unwrap() <= 8);
        }
    }
}
