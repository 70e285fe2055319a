//! Chebyshev-Lobatto interpolation on `[0, 1]`.
//!
//! Nodes are `c^α = (1 - cos(πα/K)) / 2` for `α = 0..=K`. The cardinal
//! functions `P^α` (the Lagrange basis on these nodes) are evaluated with the
//! second-kind barycentric formula, whose weights for Chebyshev-Lobatto nodes
//! are `(-1)^α`, halved at both endpoints.

use std::f64::consts::PI;

use crate::error::{arg, Error, Result};
use crate::tensor::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct ChebGrid {
    k: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Node `α` of the `K`-grid, computed so that `c^α + c^{K-α} = 1` and the
/// endpoints and midpoint are exact.
fn node(alpha: usize, k: usize) -> f64 {
    let half = |a: usize| {
        let s = (PI * a as f64 / (2 * k) as f64).sin();
        s * s
    };
    match (2 * alpha).cmp(&k) {
        std::cmp::Ordering::Less => half(alpha),
        std::cmp::Ordering::Equal => 0.5,
        std::cmp::Ordering::Greater => 1.0 - half(k - alpha),
    }
}

impl ChebGrid {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return arg("Chebyshev grid needs K >= 1");
        }
        let nodes = (0..=k).map(|a| node(a, k)).collect();
        let weights = (0..=k)
            .map(|a| {
                let w = if a % 2 == 0 { 1.0 } else { -1.0 };
                if a == 0 || a == k {
                    w / 2.0
                } else {
                    w
                }
            })
            .collect();
        Ok(Self { k, nodes, weights })
    }

    /// `K`, the number of nodes minus one.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, alpha: usize) -> f64 {
        self.nodes[alpha]
    }

    /// Values of every cardinal function at `x`, written into `out`.
    ///
    /// No range check; callers guarantee `x` is finite.
    pub fn cardinals_into(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.nodes.len());
        if let Some(hit) = self.nodes.iter().position(|&c| c == x) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[hit] = 1.0;
            return;
        }
        let mut denom = 0.0;
        for ((o, &c), &w) in out.iter_mut().zip(&self.nodes).zip(&self.weights) {
            *o = w / (x - c);
            denom += *o;
        }
        out.iter_mut().for_each(|v| *v /= denom);
    }

    pub fn cardinals(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.nodes.len()];
        self.cardinals_into(x, &mut out);
        out
    }

    /// `P^α(x)` for `x ∈ [0, 1]`.
    pub fn cardinal(&self, alpha: usize, x: f64) -> Result<f64> {
        if alpha > self.k {
            return arg(format!("cardinal index {alpha} exceeds K = {}", self.k));
        }
        check_unit(x)?;
        if let Some(hit) = self.nodes.iter().position(|&c| c == x) {
            return Ok(if hit == alpha { 1.0 } else { 0.0 });
        }
        let denom: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| w / (x - c))
            .sum();
        Ok(self.weights[alpha] / (x - self.nodes[alpha]) / denom)
    }

    /// `Σ_α samples[α] · P^α(x)`.
    pub fn interpolate(&self, samples: &[C64], x: f64) -> Result<C64> {
        if samples.len() != self.nodes.len() {
            return arg(format!(
                "expected {} samples, got {}",
                self.nodes.len(),
                samples.len()
            ));
        }
        check_unit(x)?;
        let p = self.cardinals(x);
        Ok(samples.iter().zip(&p).map(|(&f, &w)| f * w).sum())
    }

    /// Lower estimate of the Lebesgue constant: the maximum of
    /// `Σ_α |P^α(x)|` over `probe_points` uniformly spaced points of `[0, 1]`.
    pub fn lebesgue_constant(&self, probe_points: usize) -> Result<f64> {
        if probe_points < 2 {
            return arg("need at least two probe points");
        }
        let mut p = vec![0.0; self.nodes.len()];
        let mut best: f64 = 0.0;
        for i in 0..probe_points {
            let x = i as f64 / (probe_points - 1) as f64;
            self.cardinals_into(x, &mut p);
            best = best.max(p.iter().map(|v| v.abs()).sum());
        }
        Ok(best)
    }

    /// Worst interpolation error of `f_y(x) = e^{-2πixy}` measured on a
    /// uniform `x_probes × y_probes` grid of `[0, 1]²`.
    pub fn empirical_ek(&self, x_probes: usize, y_probes: usize) -> Result<f64> {
        if x_probes < 2 || y_probes < 2 {
            return arg("need at least two probes per axis");
        }
        let kp1 = self.nodes.len();
        let xs: Vec<f64> = (0..x_probes)
            .map(|i| i as f64 / (x_probes - 1) as f64)
            .collect();
        let mut basis = vec![0.0; x_probes * kp1];
        for (x, row) in xs.iter().zip(basis.chunks_mut(kp1)) {
            self.cardinals_into(*x, row);
        }
        let mut worst: f64 = 0.0;
        let mut samples = vec![C64::new(0.0, 0.0); kp1];
        for j in 0..y_probes {
            let f = TargetFunction::new(j as f64 / (y_probes - 1) as f64)?;
            for (s, &c) in samples.iter_mut().zip(&self.nodes) {
                *s = f.eval(c);
            }
            for (x, row) in xs.iter().zip(basis.chunks(kp1)) {
                let approx: C64 = samples.iter().zip(row).map(|(&s, &w)| s * w).sum();
                worst = worst.max((f.eval(*x) - approx).norm());
            }
        }
        Ok(worst)
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        arg(format!("evaluation point {x} is outside [0, 1]"))
    }
}

/// The phase family `f_y(x) = e^{-2πixy}` on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetFunction {
    y: f64,
}

impl TargetFunction {
    pub fn new(y: f64) -> Result<Self> {
        check_unit(y)?;
        Ok(Self { y })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn eval(&self, x: f64) -> C64 {
        C64::from_polar(1.0, -2.0 * PI * x * self.y)
    }
}

/// `1 + (2/π) ln(K + 1)`, the classical upper bound on the Lebesgue constant.
pub fn lebesgue_bound(k: usize) -> f64 {
    1.0 + 2.0 / PI * ((k + 1) as f64).ln()
}

/// Closed-form bound on the worst interpolation error over the family `f_y`:
/// `4 (π/2)^{K+1} e^K K^{-K} / (K - π/2)`. Only defined for `K >= 2`.
pub fn ek_bound(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "interpolation error bound needs K >= 2, got {k}"
        )));
    }
    let kf = k as f64;
    let log = 4f64.ln() + (kf + 1.0) * (PI / 2.0).ln() + kf - kf * kf.ln() - (kf - PI / 2.0).ln();
    Ok(log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lagrange_oracle(nodes: &[f64], alpha: usize, x: f64) -> f64 {
        nodes
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != alpha)
            .map(|(_, &c)| (x - c) / (nodes[alpha] - c))
            .product()
    }

    #[test]
    fn small_grids() {
        assert_eq!(ChebGrid::new(2).unwrap().nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(ChebGrid::new(1).unwrap().nodes(), &[0.0, 1.0]);
        let c1 = ChebGrid::new(4).unwrap().node(1);
        assert!((c1 - (1.0 - 2f64.sqrt() / 2.0) / 2.0).abs() < 1e-16);
        assert!((c1 - 0.146446609).abs() < 1e-9);
        assert!(ChebGrid::new(0).is_err());
    }

    #[test]
    fn grid_invariants() {
        for k in 1..=64 {
            let g = ChebGrid::new(k).unwrap();
            let c = g.nodes();
            assert_eq!(c[0], 0.0);
            assert_eq!(c[k], 1.0);
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            for a in 0..=k {
                assert!((c[a] + c[k - a] - 1.0).abs() <= 1e-15);
                let direct = (1.0 - (PI * a as f64 / k as f64).cos()) / 2.0;
                assert!((c[a] - direct).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cardinal_examples() {
        let g1 = ChebGrid::new(1).unwrap();
        assert!((g1.cardinal(0, 0.25).unwrap() - 0.75).abs() < 1e-15);

        let g8 = ChebGrid::new(8).unwrap();
        let want = lagrange_oracle(g8.nodes(), 3, 0.37);
        assert!((g8.cardinal(3, 0.37).unwrap() - want).abs() < 1e-12);

        assert!(g8.cardinal(9, 0.5).is_err());
        assert!(g8.cardinal(0, 1.5).is_err());
    }

    #[test]
    fn cardinality_and_partition_of_unity() {
        let mut state = 0x1234_5678_u64;
        for k in 1..=32 {
            let g = ChebGrid::new(k).unwrap();
            for a in 0..=k {
                for b in 0..=k {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((g.cardinal(a, g.node(b)).unwrap() - want).abs() <= 1e-12);
                }
            }
            for _ in 0..1000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                let x = (state >> 11) as f64 / (1u64 << 53) as f64;
                let sum: f64 = g.cardinals(x).iter().sum();
                assert!((sum - 1.0).abs() <= 1e-12, "K={k} x={x} sum={sum}");
            }
        }
    }

    #[test]
    fn interpolation_reproduces_constants_and_lines() {
        let g = ChebGrid::new(5).unwrap();
        let sevens = vec![C64::new(7.0, 0.0); 6];
        let line: Vec<C64> = g.nodes().iter().map(|&c| C64::new(c, 0.0)).collect();
        for x in [0.0, 0.13, 0.5, 0.77, 1.0] {
            assert!((g.interpolate(&sevens, x).unwrap() - 7.0).norm() < 1e-13);
            assert!((g.interpolate(&line, x).unwrap() - x).norm() < 1e-13);
        }
        assert!(g.interpolate(&sevens[..5], 0.3).is_err());
    }

    #[test]
    fn interpolation_of_phase_within_bound() {
        let g = ChebGrid::new(8).unwrap();
        let f = TargetFunction::new(0.9).unwrap();
        let samples: Vec<C64> = g.nodes().iter().map(|&c| f.eval(c)).collect();
        let got = g.interpolate(&samples, 0.5).unwrap();
        let exact = C64::from_polar(1.0, -2.0 * PI * 0.45);
        assert!((got - exact).norm() <= 6.44e-3);
    }

    #[test]
    fn lebesgue_estimates() {
        let g1 = ChebGrid::new(1).unwrap();
        assert!((g1.lebesgue_constant(101).unwrap() - 1.0).abs() < 1e-15);
        let g8 = ChebGrid::new(8).unwrap();
        let l8 = g8.lebesgue_constant(100_000).unwrap();
        assert!(l8 >= 1.0 && l8 <= lebesgue_bound(8));
        assert!(g8.lebesgue_constant(1).is_err());
        for k in 1..=64 {
            let l = ChebGrid::new(k).unwrap().lebesgue_constant(2001).unwrap();
            assert!(l >= 1.0 && l <= lebesgue_bound(k), "K={k}: {l}");
        }
    }

    #[test]
    fn closed_form_bounds() {
        assert!((lebesgue_bound(1) - 1.441_271_2).abs() < 1e-6);
        assert!((lebesgue_bound(8) - 2.398_8).abs() < 1e-4);
        assert!((1..64).all(|k| lebesgue_bound(k + 1) > lebesgue_bound(k)));

        // direct evaluation of 4 (π/2)^{K+1} e^K K^{-K} / (K - π/2)
        let direct = |k: i32| {
            let kf = k as f64;
            4.0 * (PI / 2.0).powi(k + 1) * kf.exp() * kf.powi(-k) / (kf - PI / 2.0)
        };
        for k in [2, 4, 8, 16, 30] {
            let b = ek_bound(k as usize).unwrap();
            assert!((b - direct(k)).abs() <= 1e-12 * direct(k));
        }
        assert!((ek_bound(2).unwrap() - 66.7).abs() < 0.05);
        assert!((ek_bound(4).unwrap() - 3.359).abs() < 1e-3);
        assert!((ek_bound(8).unwrap() - 6.44e-3).abs() < 1e-5);
        assert!((ek_bound(16).unwrap() - 2.88e-10).abs() < 1e-12);
        assert!(matches!(ek_bound(1), Err(Error::Domain(_))));
        assert!(ek_bound(0).is_err());
    }

    #[test]
    fn empirical_ek_conformance() {
        let mut prev = f64::INFINITY;
        for k in [2, 4, 8, 16] {
            let e = ChebGrid::new(k).unwrap().empirical_ek(129, 129).unwrap();
            assert!(e <= ek_bound(k).unwrap(), "K={k}: {e}");
            assert!(e <= prev);
            prev = e;
        }
    }

    #[test]
    fn zero_frequency_is_reproduced() {
        let g = ChebGrid::new(3).unwrap();
        let f = TargetFunction::new(0.0).unwrap();
        let samples: Vec<C64> = g.nodes().iter().map(|&c| f.eval(c)).collect();
        for x in [0.0, 0.2, 0.61, 1.0] {
            assert!((g.interpolate(&samples, x).unwrap() - 1.0).norm() < 1e-15);
        }
        assert!(TargetFunction::new(1.2).is_err());
    }
}
