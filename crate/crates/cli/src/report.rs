use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// Outcome of one `verify` run, printed as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    pub d: usize,
    pub observed_max_error: f64,
    pub bound: f64,
    pub elapsed_ms: f64,
    pub oracle: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

pub fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Worker count for parallel sweeps, capped by `QTTDFT_THREADS`.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("QTTDFT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(cap) if cap > 0 => cap.min(available),
        _ => available,
    }
}
