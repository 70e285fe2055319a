//! Approximate QFT at level `b` as an exact MPO of bond dimension `2^b`.
//!
//! The cores follow the same recursion as the Chebyshev construction, with
//! piecewise-constant interpolation on the uniform grid `u^β = β / 2^b`:
//!
//! ```text
//! A^{αβ}(σ, τ) = χ^α((σ + u^β)/2) · e^{-πi (σ + u^β) τ}
//! ```
//!
//! where `χ^α` is the indicator of `[u^α, u^{α+1})`.

use std::f64::consts::PI;

use crate::digits::{BitString, SignificanceOrder};
use crate::error::{arg, Result};
use crate::mpo::{Mpo, MpoKind};
use crate::qft::phase;
use crate::tensor::{ComplexTensor, C64};

/// Largest supported level; keeps the dense cores small.
pub const MAX_LEVEL: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct AqftParams {
    n: usize,
    b: usize,
    u_nodes: Vec<f64>,
}

impl AqftParams {
    pub fn new(n: usize, b: usize) -> Result<Self> {
        if n == 0 {
            return arg("the AQFT needs at least one qubit");
        }
        if b >= n {
            return arg(format!("level b = {b} must be at most n - 1 = {}", n - 1));
        }
        if b > MAX_LEVEL {
            return arg(format!(
                "level b = {b} exceeds the supported maximum {MAX_LEVEL}"
            ));
        }
        let cells = 1usize << b;
        let u_nodes = (0..cells).map(|beta| beta as f64 / cells as f64).collect();
        Ok(Self { n, b, u_nodes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn u_nodes(&self) -> &[f64] {
        &self.u_nodes
    }
}

/// Index of the cell `[u^α, u^{α+1})` containing `x ∈ [0, 1)`.
fn cell(x: f64, b: usize) -> usize {
    (x * (1usize << b) as f64).floor() as usize
}

/// `e^{-πi Σ_k Σ_{l=max(1,k-b)}^{n} 2^{l-k} σ_k τ_l}`; terms with `l > k`
/// are whole turns and dropped.
pub fn aqft_entry(params: &AqftParams, sigma: &BitString, tau: &BitString) -> Result<C64> {
    sigma.expect(params.n, 2, SignificanceOrder::MsbFirst)?;
    tau.expect(params.n, 2, SignificanceOrder::LsbFirst)?;
    let (s, t) = (sigma.digits(), tau.digits());
    let mut turns = 0.0;
    for (k, _) in s.iter().enumerate().filter(|&(_, &sk)| sk == 1) {
        let lo = k.saturating_sub(params.b);
        let frac: f64 = (lo..=k)
            .map(|l| t[l] as f64 * 2f64.powi(l as i32 - k as i32 - 1))
            .sum();
        turns += frac;
    }
    Ok(phase(turns))
}

fn check_level(b: usize) -> Result<usize> {
    if b > MAX_LEVEL {
        return arg(format!(
            "level b = {b} exceeds the supported maximum {MAX_LEVEL}"
        ));
    }
    Ok(1usize << b)
}

fn hadamard_phase(sigma: usize, tau: usize, u: f64) -> C64 {
    C64::from_polar(1.0, -PI * ((sigma * tau) as f64 + u * tau as f64))
}

/// Internal core of shape `(2^b, 2, 2, 2^b)`; each `(σ, τ, β)` column has a
/// single nonzero `α`.
pub fn build_aqft_core(b: usize) -> Result<ComplexTensor> {
    let cells = check_level(b)?;
    let mut core = ComplexTensor::zeros(&[cells, 2, 2, cells]);
    for sigma in 0..2 {
        for beta in 0..cells {
            let u = beta as f64 / cells as f64;
            let alpha = cell((sigma as f64 + u) / 2.0, b);
            for tau in 0..2 {
                core.set(&[alpha, sigma, tau, beta], hadamard_phase(sigma, tau, u));
            }
        }
    }
    Ok(core)
}

/// `Σ_α A^{αβ} = e^{-πi (σ + u^β) τ}`, shape `(1, 2, 2, 2^b)`.
pub fn build_aqft_left_core(b: usize) -> Result<ComplexTensor> {
    let cells = check_level(b)?;
    Ok(ComplexTensor::from_fn(&[1, 2, 2, cells], |i| {
        hadamard_phase(i[1], i[2], i[3] as f64 / cells as f64)
    }))
}

/// `A^{α0} = χ^α(σ/2) e^{-πi στ}`, shape `(2^b, 2, 2, 1)`.
pub fn build_aqft_right_core(b: usize) -> Result<ComplexTensor> {
    let cells = check_level(b)?;
    let mut core = ComplexTensor::zeros(&[cells, 2, 2, 1]);
    for sigma in 0..2 {
        let alpha = cell(sigma as f64 / 2.0, b);
        for tau in 0..2 {
            core.set(&[alpha, sigma, tau, 0], hadamard_phase(sigma, tau, 0.0));
        }
    }
    Ok(core)
}

pub fn assemble_aqft_mpo(n: usize, b: usize) -> Result<Mpo> {
    let params = AqftParams::new(n, b)?;
    let kind = MpoKind::Aqft { b };
    if n == 1 {
        let single = ComplexTensor::from_fn(&[1, 2, 2, 1], |i| hadamard_phase(i[1], i[2], 0.0));
        return Mpo::new(1, 2, kind, vec![single]);
    }
    let mut cores = Vec::with_capacity(n);
    cores.push(build_aqft_left_core(params.b)?);
    if n > 2 {
        let inner = build_aqft_core(params.b)?;
        cores.extend(std::iter::repeat_n(inner, n - 2));
    }
    cores.push(build_aqft_right_core(params.b)?);
    Mpo::new(n, 2, kind, cores)
}

/// `π n 2^{-b}`.
pub fn aqft_error_bound(n: usize, b: usize) -> f64 {
    PI * n as f64 * 2f64.powi(-(b as i32))
}
