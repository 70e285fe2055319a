//! Closed-form MPO of the discrete Fourier transform.
//!
//! With `y_{≤m} = Σ_{l≤m} d^{l-m-1} τ_l` the partial tensors
//! `F_m^α(σ_{1:m}, τ_{1:m}) = F(σ_{1:m}, τ_{1:m}) · e^{-2πi y_{≤m} c^α}`
//! satisfy `F_{m+1}^β ≈ Σ_α F_m^α A^{αβ}` once the phase
//! `e^{-2πi y_{≤m} (σ + c^β)/d}` is replaced by its Chebyshev-Lobatto
//! interpolant. That gives one internal core
//!
//! ```text
//! A^{αβ}(σ, τ) = P^α((σ + c^β)/d) · e^{-2πi (σ + c^β) τ / d}
//! ```
//!
//! shared by every interior site, a left core `A_L^β = Σ_α A^{αβ}` and a
//! right core `A_R^α = A^{α0}`.

use std::f64::consts::PI;

use crate::cheb::{ek_bound, lebesgue_bound, ChebGrid};
use crate::digits::{checked_pow, BitString, SignificanceOrder};
use crate::error::{arg, Result};
use crate::mpo::{Mpo, MpoKind};
use crate::tensor::{ComplexTensor, C64};

fn check_base(d: usize) -> Result<()> {
    if d < 2 {
        return arg(format!("qudit dimension must be at least 2, got {d}"));
    }
    Ok(())
}

/// `e^{-2πi turns}` with `turns` first reduced to `[0, 1)`.
pub(crate) fn phase(turns: f64) -> C64 {
    let t = turns.rem_euclid(1.0);
    match t {
        0.0 => C64::new(1.0, 0.0),
        0.25 => C64::new(0.0, -1.0),
        0.5 => C64::new(-1.0, 0.0),
        0.75 => C64::new(0.0, 1.0),
        _ => C64::from_polar(1.0, -2.0 * PI * t),
    }
}

/// Exact DFT entry `F(σ, τ) = e^{-(2/d)πi Σ_{k,l} d^{l-k} σ_k τ_l}`.
///
/// Pairs with `l > k` contribute whole turns and are skipped; what remains is
/// `Σ_k σ_k y_{≤k}` where `y_{≤k} = (y_{≤k-1} + τ_k)/d`, each term reduced
/// modulo one before summing.
pub fn dft_entry(n: usize, d: usize, sigma: &BitString, tau: &BitString) -> Result<C64> {
    check_base(d)?;
    sigma.expect(n, d, SignificanceOrder::MsbFirst)?;
    tau.expect(n, d, SignificanceOrder::LsbFirst)?;
    Ok(dft_phase(d, sigma.digits(), tau.digits()))
}

pub(crate) fn dft_phase(d: usize, sigma: &[usize], tau: &[usize]) -> C64 {
    let df = d as f64;
    let mut y = 0.0;
    let mut turns = 0.0;
    for (&s, &t) in sigma.iter().zip(tau) {
        y = (y + t as f64) / df;
        turns += (s as f64 * y).fract();
    }
    phase(turns)
}

/// Internal core of shape `(K+1, d, d, K+1)`.
pub fn build_internal_core(k: usize, d: usize) -> Result<ComplexTensor> {
    check_base(d)?;
    let grid = ChebGrid::new(k)?;
    let kp1 = k + 1;
    let mut core = ComplexTensor::zeros(&[kp1, d, d, kp1]);
    let mut p = vec![0.0; kp1];
    for sigma in 0..d {
        for beta in 0..kp1 {
            let x = (sigma as f64 + grid.node(beta)) / d as f64;
            grid.cardinals_into(x, &mut p);
            for tau in 0..d {
                let ph = core_phase(d, sigma, tau, grid.node(beta));
                for (alpha, &pa) in p.iter().enumerate() {
                    core.set(&[alpha, sigma, tau, beta], ph * pa);
                }
            }
        }
    }
    Ok(core)
}

/// `e^{-2πi (σ + c) τ / d}` with the integer part `στ` reduced exactly.
fn core_phase(d: usize, sigma: usize, tau: usize, c: f64) -> C64 {
    let df = d as f64;
    phase(((sigma * tau) % d) as f64 / df + c * tau as f64 / df)
}

/// Left core `A_L^β(σ, τ) = e^{-2πi (σ + c^β) τ / d}`, shape `(1, d, d, K+1)`.
pub fn build_left_core(k: usize, d: usize) -> Result<ComplexTensor> {
    check_base(d)?;
    let grid = ChebGrid::new(k)?;
    Ok(ComplexTensor::from_fn(&[1, d, d, k + 1], |i| {
        core_phase(d, i[1], i[2], grid.node(i[3]))
    }))
}

/// Right core `A_R^α = A^{α0}`, shape `(K+1, d, d, 1)`.
pub fn build_right_core(k: usize, d: usize) -> Result<ComplexTensor> {
    check_base(d)?;
    let grid = ChebGrid::new(k)?;
    let kp1 = k + 1;
    let mut core = ComplexTensor::zeros(&[kp1, d, d, 1]);
    for sigma in 0..d {
        let p = grid.cardinals(sigma as f64 / d as f64);
        for tau in 0..d {
            let ph = core_phase(d, sigma, tau, 0.0);
            for (alpha, &pa) in p.iter().enumerate() {
                core.set(&[alpha, sigma, tau, 0], ph * pa);
            }
        }
    }
    Ok(core)
}

/// The `n`-site MPO `[A_L, A, …, A, A_R]` with bond dimension `K + 1`.
///
/// For `n = 1` the single core is the exact `d × d` phase matrix.
pub fn assemble_qft_mpo(n: usize, k: usize, d: usize) -> Result<Mpo> {
    if n == 0 {
        return arg("the transform needs at least one site");
    }
    let kind = MpoKind::Chebyshev { k };
    let left = build_left_core(k, d)?;
    if n == 1 {
        let single = ComplexTensor::from_fn(&[1, d, d, 1], |i| left.get(&[0, i[1], i[2], 0]));
        return Mpo::new(1, d, kind, vec![single]);
    }
    let mut cores = Vec::with_capacity(n);
    cores.push(left);
    if n > 2 {
        let inner = build_internal_core(k, d)?;
        cores.extend(std::iter::repeat_n(inner, n - 2));
    }
    cores.push(build_right_core(k, d)?);
    Mpo::new(n, d, kind, cores)
}

/// Both forms of the entrywise error bound on the assembled MPO.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoremBound {
    /// `(Λ^{n-1} - 1)/(Λ - 1) · E`.
    pub geometric: f64,
    /// `(n - 1) Λ^{n-2} E`.
    pub crude: f64,
}

/// Error bound from a Lebesgue constant `lambda` and a per-step
/// interpolation error `ek`.
pub fn error_bound_from(n: usize, lambda: f64, ek: f64) -> TheoremBound {
    if n <= 1 {
        return TheoremBound {
            geometric: 0.0,
            crude: 0.0,
        };
    }
    let steps = (n - 1) as i32;
    let geometric = if (lambda - 1.0).abs() < 1e-12 {
        steps as f64 * ek
    } else {
        (lambda.powi(steps) - 1.0) / (lambda - 1.0) * ek
    };
    TheoremBound {
        geometric,
        crude: steps as f64 * lambda.powi(steps - 1) * ek,
    }
}

/// Closed-form bound with `Λ_K ≤ 1 + (2/π) ln(K+1)` and the `E_K` bound.
/// Zero for `n = 1`; needs `K >= 2` otherwise.
pub fn theorem_error_bound(n: usize, k: usize) -> Result<TheoremBound> {
    if n <= 1 {
        return Ok(error_bound_from(n, 1.0, 0.0));
    }
    Ok(error_bound_from(n, lebesgue_bound(k), ek_bound(k)?))
}

/// The same bound with measured `Λ_K` and `E_K` on uniform probe grids.
/// Tighter, but only as good as the probes.
pub fn empirical_error_bound(n: usize, k: usize, probes: usize) -> Result<TheoremBound> {
    let grid = ChebGrid::new(k)?;
    let lambda = grid.lebesgue_constant(probes)?;
    let ek = grid.empirical_ek(probes, probes)?;
    Ok(error_bound_from(n, lambda, ek))
}

/// `y_{≤m} = Σ_{l=1}^{m} 2^{l-m-1} τ_l`.
pub fn y_less_equal(tau: &[usize], m: usize) -> f64 {
    tau[..m]
        .iter()
        .enumerate()
        .map(|(l, &t)| t as f64 * 2f64.powi(l as i32 - m as i32))
        .sum()
}

/// `x_{>m} = Σ_{k=m+1}^{n} 2^{m-k} σ_k`.
pub fn x_greater(sigma: &[usize], m: usize) -> f64 {
    sigma[m..]
        .iter()
        .enumerate()
        .map(|(j, &s)| s as f64 * 2f64.powi(-(j as i32 + 1)))
        .sum()
}

/// Rank-`(K+1)` factorization of the `m`-th unfolding of the qubit DFT.
///
/// `r` is indexed `[s_m, t_m, α]` and `l` is indexed `[α, s', t']`, where
/// `s_m, t_m` are the indices of `σ_{1:m}, τ_{1:m}` and `s', t'` those of
/// `σ_{m+1:n}, τ_{m+1:n}` under the usual conventions.
#[derive(Clone, Debug)]
pub struct UnfoldingFactors {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub r: ComplexTensor,
    pub l: ComplexTensor,
}

pub fn build_unfolding_factors(n: usize, m: usize, k: usize) -> Result<UnfoldingFactors> {
    if m == 0 || m >= n {
        return arg(format!("split {m} must satisfy 1 <= m < {n}"));
    }
    if n > 12 {
        return arg("unfolding factors are dense; n must be at most 12");
    }
    let grid = ChebGrid::new(k)?;
    let kp1 = k + 1;
    let head = 1usize << m;
    let tail = 1usize << (n - m);

    let r = ComplexTensor::from_fn(&[head, head, kp1], |i| {
        let (s, t, a) = (i[0], i[1], i[2]);
        let y = t as f64 / head as f64;
        phase(((s * t) % head) as f64 / head as f64 + y * grid.node(a))
    });
    let mut l = ComplexTensor::zeros(&[kp1, tail, tail]);
    for s in 0..tail {
        let p = grid.cardinals(s as f64 / tail as f64);
        for t in 0..tail {
            let f = phase(((s * t) % tail) as f64 / tail as f64);
            for (a, &pa) in p.iter().enumerate() {
                l.set(&[a, s, t], f * pa);
            }
        }
    }
    Ok(UnfoldingFactors { n, m, k, r, l })
}

impl UnfoldingFactors {
    /// Approximation of `F` at global row `s`, column `t`.
    pub fn approx_entry(&self, s: usize, t: usize) -> C64 {
        let tail_bits = self.n - self.m;
        let head = 1usize << self.m;
        let (sm, sp) = (s >> tail_bits, s & ((1 << tail_bits) - 1));
        let (tm, tp) = (t % head, t / head);
        (0..=self.k)
            .map(|a| self.r.get(&[sm, tm, a]) * self.l.get(&[a, sp, tp]))
            .sum()
    }

    /// The unfolding matrix reconstructed from the factors, rows indexed by
    /// `(s_m, t_m)` and columns by `(s', t')`.
    pub fn contract(&self) -> Result<ComplexTensor> {
        let head = 1usize << self.m;
        let tail = 1usize << (self.n - self.m);
        let kp1 = self.k + 1;
        let rm = self.r.clone().reshape(&[head * head, kp1])?;
        let lm = self.l.clone().reshape(&[kp1, tail * tail])?;
        crate::tensor::matmul(&rm, &lm)
    }

    /// Largest entrywise deviation from the exact DFT, over all entries.
    pub fn max_error(&self) -> Result<f64> {
        let size = checked_pow(2, self.n).expect("n bounded at construction");
        let mut worst: f64 = 0.0;
        for s in 0..size {
            for t in 0..size {
                let exact = phase(((s * t) % size) as f64 / size as f64);
                worst = worst.max((self.approx_entry(s, t) - exact).norm());
            }
        }
        Ok(worst)
    }
}

/// Exact partial tensor `F_m`, shape `(d^m, d^m, K+1)` indexed `[s_m, t_m, α]`.
pub fn partial_tensor(m: usize, k: usize, d: usize) -> Result<ComplexTensor> {
    check_base(d)?;
    let grid = ChebGrid::new(k)?;
    let size = checked_pow(d, m)
        .filter(|&s| s <= 1 << 10)
        .ok_or_else(|| crate::error::Error::Argument(format!("d^m too large for m = {m}")))?;
    Ok(ComplexTensor::from_fn(&[size, size, k + 1], |i| {
        let (s, t, a) = (i[0], i[1], i[2]);
        let y = t as f64 / size as f64;
        phase(((s * t) % size) as f64 / size as f64 + y * grid.node(a))
    }))
}

/// Attaches one core on the right of a partial tensor `[s, t, α]`,
/// producing `[s σ, t + d^m τ, β]`.
pub fn attach_core(partial: &ComplexTensor, core: &ComplexTensor) -> Result<ComplexTensor> {
    let ps = partial.shape();
    let cs = core.shape();
    if ps.len() != 3 || cs.len() != 4 || ps[2] != cs[0] || cs[1] != cs[2] {
        return arg(format!(
            "cannot attach core {cs:?} to partial tensor {ps:?}"
        ));
    }
    let (size, d, r) = (ps[0], cs[1], cs[3]);
    let mut out = ComplexTensor::zeros(&[size * d, size * d, r]);
    for s in 0..size {
        for t in 0..size {
            for sig in 0..d {
                for tau in 0..d {
                    for b in 0..r {
                        let v: C64 = (0..ps[2])
                            .map(|a| partial.get(&[s, t, a]) * core.get(&[a, sig, tau, b]))
                            .sum();
                        out.set(&[s * d + sig, t + size * tau, b], v);
                    }
                }
            }
        }
    }
    Ok(out)
}
