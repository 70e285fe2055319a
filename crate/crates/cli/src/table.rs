use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use qttdft::{
    aqft_error_bound, assemble_aqft_mpo, assemble_qft_mpo, ek_bound, lebesgue_bound,
    theorem_error_bound,
};
use rayon::prelude::*;

use crate::report::{elapsed_ms, worker_count};
use crate::verify::{dft_deviation, sampling};
use crate::{Outcome, TableArgs};

/// Parses an inclusive `A:B:STEP` range.
pub fn parse_range(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    ensure!(
        parts.len() == 3,
        "range {text:?} is not of the form A:B:STEP"
    );
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("bad number {s:?} in range {text:?}"))
    };
    let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    ensure!(step > 0, "range step must be positive");
    if a > b {
        bail!("empty range {text:?}: start exceeds end");
    }
    Ok((a..=b).step_by(step).collect())
}

#[derive(Clone, Debug)]
pub struct Row {
    pub param: usize,
    pub bond_dimension: usize,
    pub observed_max_error: f64,
    pub bound: Option<f64>,
    pub ek_bound: Option<f64>,
    pub lebesgue_bound: Option<f64>,
    pub elapsed_ms: f64,
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn render_csv(rows: &[Row], aqft: bool) -> String {
    let mut s = String::new();
    if aqft {
        s.push_str(
            "b,bond_dimension,observed_max_error,aqft_bound,ek_bound,lebesgue_bound,elapsed_ms\n",
        );
    } else {
        s.push_str("K,bond_dimension,observed_max_error,theorem_bound,ek_bound,lebesgue_bound,elapsed_ms\n");
    }
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:e},{},{},{},{:.3}",
            r.param,
            r.bond_dimension,
            r.observed_max_error,
            cell(r.bound),
            cell(r.ek_bound),
            cell(r.lebesgue_bound),
            r.elapsed_ms
        );
    }
    s
}

pub fn rows(args: &TableArgs) -> Result<Vec<Row>> {
    let mut params = parse_range(&args.ranks)?;
    if args.aqft {
        let top = args.n.saturating_sub(1);
        for &b in params.iter().filter(|&&b| b > top) {
            eprintln!("skipping b = {b}: the level must be at most n - 1 = {top}");
        }
        params.retain(|&b| b <= top);
    }
    let sampling = sampling(args.n, 2, args.samples, args.seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()?;
    pool.install(|| {
        params
            .par_iter()
            .map(|&p| {
                let start = Instant::now();
                let row = if args.aqft {
                    let mpo = assemble_aqft_mpo(args.n, p)?;
                    Row {
                        param: p,
                        bond_dimension: mpo.max_bond(),
                        observed_max_error: dft_deviation(&mpo, sampling)?,
                        bound: Some(aqft_error_bound(args.n, p)),
                        ek_bound: None,
                        lebesgue_bound: None,
                        elapsed_ms: 0.0,
                    }
                } else {
                    let mpo = assemble_qft_mpo(args.n, p, 2)?;
                    Row {
                        param: p,
                        bond_dimension: mpo.max_bond(),
                        observed_max_error: dft_deviation(&mpo, sampling)?,
                        bound: theorem_error_bound(args.n, p).ok().map(|b| b.geometric),
                        ek_bound: ek_bound(p).ok(),
                        lebesgue_bound: Some(lebesgue_bound(p)),
                        elapsed_ms: 0.0,
                    }
                };
                Ok(Row {
                    elapsed_ms: elapsed_ms(start),
                    ..row
                })
            })
            .collect()
    })
}

pub fn run(args: &TableArgs, out: &mut dyn Write) -> Result<Outcome> {
    let csv = render_csv(&rows(args)?, args.aqft);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(Outcome::Pass)
}
