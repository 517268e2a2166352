//! Command-line companion of `caqed-core`: JSON configs, plot presets,
//! CSV and binary exports with a checksummed manifest, and output
//! comparison.

pub mod compare;
pub mod config;
pub mod output;
pub mod presets;
pub mod runner;

use anyhow::{Context, Result};
use serde_json::json;

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "CAQED_WORKERS";

/// Worker count from `CAQED_WORKERS`, else the available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{WORKERS_ENV} must be a positive integer, got '{v}'"))?;
            anyhow::ensure!(n > 0, "{WORKERS_ENV} must be at least 1");
            Ok(n)
        }
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Error category and process exit code.
pub fn classify(err: &anyhow::Error) -> (&'static str, i32) {
    use caqed_core::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Quadrature { .. } | E::NoConvergence { .. } | E::OnBranchCut { .. } => ("quadrature", 4),
                E::BoundaryReached { .. } | E::NormDrift { .. } => ("oracle", 5),
                _ => ("validation", 3),
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return ("io", 2);
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return ("config", 2);
        }
    }
    ("config", 2)
}

/// One-line JSON error document.
pub fn error_json(err: &anyhow::Error) -> String {
    let (kind, code) = classify(err);
    let chain: Vec<String> = err.chain().map(|c| c.to_string()).collect();
    json!({"error": {"kind": kind, "exit_code": code, "message": format!("{err:#}"), "causes": chain}}).to_string()
}
