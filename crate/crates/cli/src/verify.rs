use std::io::Write;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use qttdft::cheb::lebesgue_bound;
use qttdft::qft::empirical_error_bound;
use qttdft::{
    aqft_entry, aqft_error_bound, assemble_aqft_mpo, assemble_qft_mpo, block_identity_check,
    build_unfolding_factors, dft_entry, ek_bound, max_deviation, theorem_error_bound, AqftParams,
    BitString, ChebGrid, Mpo, Sampling,
};
use serde_json::json;

use crate::report::{elapsed_ms, RunReport};
use crate::{Mode, Outcome, VerifyArgs};

/// Largest exhaustive comparison, in matrix entries.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 24;

/// Allowance for roundoff when a construction is exact.
pub const EXACT_TOLERANCE: f64 = 1e-13;

/// Block identity residual allowed at every level.
pub const BLOCK_TOLERANCE: f64 = 1e-11;

fn need(v: Option<usize>, flag: &str, mode: &str) -> Result<usize> {
    v.with_context(|| format!("--mode {mode} needs --{flag}"))
}

/// Exhaustive unless the matrix has more than [`EXHAUSTIVE_LIMIT`] entries,
/// in which case `--samples` is required.
pub fn sampling(n: usize, d: usize, samples: Option<usize>, seed: u64) -> Result<Sampling> {
    if let Some(samples) = samples {
        ensure!(samples > 0, "--samples must be positive");
        return Ok(Sampling::Random { samples, seed });
    }
    let entries = (d as u128).checked_pow(2 * n as u32);
    match entries {
        Some(e) if e <= EXHAUSTIVE_LIMIT => Ok(Sampling::Exhaustive),
        _ => bail!(
            "an exhaustive check of {d}^{} entries exceeds {EXHAUSTIVE_LIMIT}; pass --samples",
            2 * n
        ),
    }
}

fn sampling_name(s: Sampling) -> String {
    match s {
        Sampling::Exhaustive => "exhaustive".into(),
        Sampling::Random { samples, seed } => format!("{samples} samples, seed {seed}"),
    }
}

/// Largest deviation of an MPO from the exact DFT.
pub fn dft_deviation(mpo: &Mpo, sampling: Sampling) -> Result<f64> {
    let (n, d) = (mpo.n(), mpo.d());
    Ok(max_deviation(
        mpo,
        |s: &BitString, t: &BitString| dft_entry(n, d, s, t).expect("digits drawn for this MPO"),
        sampling,
    )?)
}

pub fn run(args: &VerifyArgs, echo: &str, out: &mut dyn Write) -> Result<Outcome> {
    let report = verify(args, echo)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if report.pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

pub fn verify(args: &VerifyArgs, echo: &str) -> Result<RunReport> {
    let start = Instant::now();
    let d = args.qudit;
    let mut report = RunReport {
        command: echo.to_string(),
        mode: String::new(),
        n: args.n,
        k: None,
        b: None,
        d,
        observed_max_error: 0.0,
        bound: 0.0,
        elapsed_ms: 0.0,
        oracle: String::new(),
        pass: false,
        details: serde_json::Value::Null,
    };
    match args.mode {
        Mode::Entrywise => {
            let n = need(args.n, "n", "entrywise")?;
            let k = need(args.rank, "rank", "entrywise")?;
            let sampling = sampling(n, d, args.samples, args.seed)?;
            let mpo = assemble_qft_mpo(n, k, d)?;
            let bound = theorem_error_bound(n, k).context("the entrywise bound needs K >= 2")?;
            report.mode = "entrywise".into();
            report.k = Some(k);
            report.observed_max_error = dft_deviation(&mpo, sampling)?;
            report.bound = bound.geometric.max(EXACT_TOLERANCE);
            report.oracle = format!("dft_entry ({})", sampling_name(sampling));
            report.details =
                json!({ "crude_bound": bound.crude, "bond_dimension": mpo.max_bond() });
        }
        Mode::Unfolding => {
            let n = need(args.n, "n", "unfolding")?;
            let k = need(args.rank, "rank", "unfolding")?;
            ensure!(d == 2, "unfolding factors are built for qubits only");
            let mut errors = Vec::with_capacity(n.saturating_sub(1));
            for m in 1..n {
                errors.push(build_unfolding_factors(n, m, k)?.max_error()?);
            }
            ensure!(!errors.is_empty(), "--mode unfolding needs n >= 2");
            report.mode = "unfolding".into();
            report.k = Some(k);
            report.observed_max_error = errors.iter().copied().fold(0.0, f64::max);
            report.bound = ek_bound(k)?;
            report.oracle = "exact DFT entries (exhaustive)".into();
            report.details = json!({ "per_split": errors });
        }
        Mode::AqftExact | Mode::AqftError => {
            let n = need(args.n, "n", "aqft")?;
            let b = need(args.b, "b", "aqft")?;
            ensure!(d == 2, "the approximate QFT is defined for qubits only");
            let sampling = sampling(n, 2, args.samples, args.seed)?;
            let mpo = assemble_aqft_mpo(n, b)?;
            report.b = Some(b);
            if args.mode == Mode::AqftExact {
                let params = AqftParams::new(n, b)?;
                report.mode = "aqft-exact".into();
                report.observed_max_error = max_deviation(
                    &mpo,
                    |s: &BitString, t: &BitString| aqft_entry(&params, s, t).expect("qubit digits"),
                    sampling,
                )?;
                report.bound = EXACT_TOLERANCE;
                report.oracle = format!("aqft_entry ({})", sampling_name(sampling));
            } else {
                report.mode = "aqft-error".into();
                report.observed_max_error = dft_deviation(&mpo, sampling)?;
                report.bound = aqft_error_bound(n, b).max(EXACT_TOLERANCE);
                report.oracle = format!("dft_entry ({})", sampling_name(sampling));
            }
            report.details = json!({ "bond_dimension": mpo.max_bond() });
        }
        Mode::Blocks => {
            let n = need(args.n, "n", "blocks")?;
            ensure!(d == 2, "the block identity is checked for qubits only");
            let levels: Vec<usize> = match args.level {
                Some(l) => vec![l],
                None => (0..=n).collect(),
            };
            let mut per_level = Vec::with_capacity(levels.len());
            let mut worst: f64 = 0.0;
            for l in levels {
                let r = block_identity_check(n, l, args.rank)?;
                worst = worst.max(r.max_residual);
                let tail = r
                    .blocks
                    .iter()
                    .filter_map(|b| b.truncated_residual)
                    .fold(None, |acc: Option<f64>, x| {
                        Some(acc.map_or(x, |a| a.max(x)))
                    });
                per_level.push(json!({
                    "level": l,
                    "max_residual": r.max_residual,
                    "max_numerical_rank": r.max_numerical_rank,
                    "rank_threshold": r.rank_threshold,
                    "max_truncated_residual": tail,
                }));
            }
            report.mode = "blocks".into();
            report.k = args.rank;
            report.observed_max_error = worst;
            report.bound = BLOCK_TOLERANCE;
            report.oracle = "dense DFT blocks".into();
            report.details = json!({ "levels": per_level });
        }
        Mode::Interp => {
            let k = need(args.rank, "rank", "interp")?;
            ensure!(args.probes >= 2, "--probes must be at least 2");
            let grid = ChebGrid::new(k)?;
            report.mode = "interp".into();
            report.n = None;
            report.k = Some(k);
            report.observed_max_error = grid.empirical_ek(args.probes, args.probes)?;
            report.bound = ek_bound(k)?;
            report.oracle = format!("phase family on a {0}x{0} probe grid", args.probes);
            let mut details = json!({
                "lebesgue_constant": grid.lebesgue_constant(args.probes)?,
                "lebesgue_bound": lebesgue_bound(k),
            });
            if let Some(n) = args.n {
                details["empirical_error_bound"] =
                    json!(empirical_error_bound(n, k, args.probes)?.geometric);
            }
            report.details = details;
        }
    }
    report.pass = report.observed_max_error <= report.bound;
    report.elapsed_ms = elapsed_ms(start);
    Ok(report)
}
