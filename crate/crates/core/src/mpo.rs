//! Matrix product operators over `d`-ary sites.
//!
//! Core `k` has shape `(r_{k-1}, d, d, r_k)` ordered as
//! (left bond, output digit `σ_k`, input digit `τ_k`, right bond), with
//! `r_0 = r_n = 1`. Rows of the represented operator are indexed by `σ`
//! most-significant first and columns by `τ` least-significant first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digits::{checked_pow, index_to_digits, BitString, SignificanceOrder};
use crate::error::{arg, Error, Result};
use crate::tensor::{ComplexTensor, C64};

/// Largest intermediate (in complex entries) a dense contraction may allocate.
pub const DENSE_LIMIT: u128 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpoKind {
    /// Chebyshev-Lobatto construction with `K + 1` nodes.
    Chebyshev { k: usize },
    /// Approximate QFT at level `b`.
    Aqft { b: usize },
}

impl MpoKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Chebyshev { .. } => "chebyshev",
            Self::Aqft { .. } => "aqft",
        }
    }

    pub fn param(self) -> usize {
        match self {
            Self::Chebyshev { k } => k,
            Self::Aqft { b } => b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mpo {
    n: usize,
    d: usize,
    kind: MpoKind,
    cores: Vec<ComplexTensor>,
}

impl Mpo {
    pub fn new(n: usize, d: usize, kind: MpoKind, cores: Vec<ComplexTensor>) -> Result<Self> {
        if n == 0 {
            return arg("an MPO needs at least one site");
        }
        if cores.len() != n {
            return arg(format!("expected {n} cores, got {}", cores.len()));
        }
        let mut left = 1;
        for (k, core) in cores.iter().enumerate() {
            let s = core.shape();
            if s.len() != 4 || s[0] != left || s[1] != d || s[2] != d {
                return arg(format!(
                    "core {k} has shape {s:?}, expected [{left}, {d}, {d}, _]"
                ));
            }
            left = s[3];
        }
        if left != 1 {
            return arg(format!("last core has right bond {left}, expected 1"));
        }
        Ok(Self { n, d, kind, cores })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> MpoKind {
        self.kind
    }

    pub fn cores(&self) -> &[ComplexTensor] {
        &self.cores
    }

    /// Internal bond extents `r_1..r_{n-1}`.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.cores[..self.n - 1]
            .iter()
            .map(|c| c.shape()[3])
            .collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Entry `F(σ, τ)`, evaluated as a left-to-right product of the selected
    /// bond matrices in `O(n r^2)`.
    pub fn entry(&self, sigma: &BitString, tau: &BitString) -> Result<C64> {
        sigma.expect(self.n, self.d, SignificanceOrder::MsbFirst)?;
        tau.expect(self.n, self.d, SignificanceOrder::LsbFirst)?;
        Ok(self.entry_digits(sigma.digits(), tau.digits()))
    }

    pub(crate) fn entry_digits(&self, sigma: &[usize], tau: &[usize]) -> C64 {
        let mut vec = vec![C64::new(1.0, 0.0)];
        let mut next = Vec::new();
        for (core, (&s, &t)) in self.cores.iter().zip(sigma.iter().zip(tau)) {
            let sh = core.shape();
            let (l, r) = (sh[0], sh[3]);
            let data = core.data();
            let d = self.d;
            next.clear();
            next.resize(r, C64::new(0.0, 0.0));
            for (a, &va) in vec.iter().enumerate().take(l) {
                let base = ((a * d + s) * d + t) * r;
                for (o, &c) in next.iter_mut().zip(&data[base..base + r]) {
                    *o += va * c;
                }
            }
            std::mem::swap(&mut vec, &mut next);
        }
        vec[0]
    }

    /// Dense `d^n × d^n` matrix with row `s` (σ most-significant first) and
    /// column `t` (τ least-significant first).
    pub fn to_dense(&self) -> Result<ComplexTensor> {
        let d = self.d;
        let too_big = || Error::SizeGuard {
            requested: u128::MAX,
            limit: DENSE_LIMIT,
        };
        let mut peak: u128 = 1;
        for (k, core) in self.cores.iter().enumerate() {
            let side = checked_pow(d, k + 1).ok_or_else(too_big)? as u128;
            peak = peak.max(side * side * core.shape()[3] as u128);
        }
        if peak > DENSE_LIMIT {
            return Err(Error::SizeGuard {
                requested: peak,
                limit: DENSE_LIMIT,
            });
        }

        // acc is indexed [s][t][bond] with s built MSB-first, t LSB-first
        let mut acc = vec![C64::new(1.0, 0.0)];
        let (mut rows, mut cols, mut bond) = (1usize, 1usize, 1usize);
        for core in &self.cores {
            let r = core.shape()[3];
            let data = core.data();
            let (nrows, ncols) = (rows * d, cols * d);
            let mut next = vec![C64::new(0.0, 0.0); nrows * ncols * r];
            for s in 0..rows {
                for t in 0..cols {
                    let src = &acc[(s * cols + t) * bond..(s * cols + t + 1) * bond];
                    for sig in 0..d {
                        let ns = s * d + sig;
                        for tau in 0..d {
                            let nt = t + cols * tau;
                            let dst = &mut next[(ns * ncols + nt) * r..(ns * ncols + nt + 1) * r];
                            for (a, &va) in src.iter().enumerate() {
                                if va == C64::new(0.0, 0.0) {
                                    continue;
                                }
                                let base = ((a * d + sig) * d + tau) * r;
                                for (o, &c) in dst.iter_mut().zip(&data[base..base + r]) {
                                    *o += va * c;
                                }
                            }
                        }
                    }
                }
            }
            acc = next;
            rows = nrows;
            cols = ncols;
            bond = r;
        }
        ComplexTensor::matrix(rows, cols, acc)
    }
}

/// `F(σ, τ)` read off the MPO.
pub fn mpo_entry(mpo: &Mpo, sigma: &BitString, tau: &BitString) -> Result<C64> {
    mpo.entry(sigma, tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every `(σ, τ)` pair, through a dense contraction.
    Exhaustive,
    /// `samples` pairs drawn uniformly with a seeded generator.
    Random { samples: usize, seed: u64 },
}

/// Largest `|mpo(σ, τ) − reference(σ, τ)|` over the chosen entries.
pub fn max_deviation<F>(mpo: &Mpo, reference: F, sampling: Sampling) -> Result<f64>
where
    F: Fn(&BitString, &BitString) -> C64,
{
    let (n, d) = (mpo.n(), mpo.d());
    let mut worst: f64 = 0.0;
    match sampling {
        Sampling::Exhaustive => {
            let dense = mpo.to_dense()?;
            let size = dense.rows();
            let taus: Vec<BitString> = (0..size)
                .map(|t| index_to_digits(t, n, d, SignificanceOrder::LsbFirst))
                .collect::<Result<_>>()?;
            for s in 0..size {
                let sigma = index_to_digits(s, n, d, SignificanceOrder::MsbFirst)?;
                let row = &dense.data()[s * size..(s + 1) * size];
                for (tau, &v) in taus.iter().zip(row) {
                    worst = worst.max((v - reference(&sigma, tau)).norm());
                }
            }
        }
        Sampling::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let sd: Vec<usize> = (0..n).map(|_| rng.random_range(0..d)).collect();
                let td: Vec<usize> = (0..n).map(|_| rng.random_range(0..d)).collect();
                let sigma = BitString::msb_first(sd, d)?;
                let tau = BitString::lsb_first(td, d)?;
                let v = mpo.entry_digits(sigma.digits(), tau.digits());
                worst = worst.max((v - reference(&sigma, &tau)).norm());
            }
        }
    }
    Ok(worst)
}
