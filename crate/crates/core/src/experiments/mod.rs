//! Replicated Monte-Carlo harness.
//!
//! Every task (grid point × replicate) derives its own seeds from the root
//! seed and owns all of its state. Tasks run on the current rayon pool and
//! results are assembled in task order, so the worker count never changes
//! the output. Use [`with_jobs`] to pin the pool size.

mod checks;
mod output;
mod sweep;

pub use checks::{
    cm_error_rate_check, dual_complete_check, error_distribution, excess_bound_holds,
    regular_core_check, CmRateCheck, DistributionConfig, DistributionRow, DualCheck,
    ErrorDistribution, RegularCheck,
};
pub use output::{metadata_header, write_atomic};
pub use sweep::{
    concentration, sweep_lambda, zipf_sweep, ConcentrationPoint, ConcentrationTable, SweepRow,
    SweepSummary, SWEEP_CSV_HEADER,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::Strategy;
use crate::streams::StreamModel;

/// Default histogram bin width on `R_e`.
pub const DEFAULT_BIN_WIDTH: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k: usize,
    pub n: usize,
    /// Edge densities `m / n`.
    pub lambdas: Vec<f64>,
    #[serde(rename = "N")]
    pub multiplicity: u64,
    pub model: StreamModel,
    pub strategies: Vec<Strategy>,
    pub replicates: usize,
    pub root_seed: u64,
    pub check_invariants: bool,
}

impl ExperimentConfig {
    /// Desk-scale defaults: `n = 1000`, `N = 10⁴`, 15 replicates, N-uniform
    /// input, both strategies.
    pub fn new(k: usize, lambdas: Vec<f64>) -> Self {
        ExperimentConfig {
            k,
            n: 1000,
            lambdas,
            multiplicity: 10_000,
            model: StreamModel::Uniform,
            strategies: Strategy::BOTH.to_vec(),
            replicates: 15,
            root_seed: crate::seed::DEFAULT_SEED,
            check_invariants: false,
        }
    }

    /// Edge count for grid point `lambda`.
    pub fn edge_count(&self, lambda: f64) -> usize {
        (lambda * self.n as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.n < self.k {
            return Err(Error::invalid(format!(
                "need 2 <= k <= n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if self.lambdas.is_empty() {
            return Err(Error::invalid("lambda grid is empty"));
        }
        for &l in &self.lambdas {
            if !l.is_finite() || self.edge_count(l) < 1 {
                return Err(Error::invalid(format!(
                    "lambda = {l} gives fewer than one edge at n = {}",
                    self.n
                )));
            }
        }
        if self.replicates < 1 {
            return Err(Error::invalid("replicates must be >= 1"));
        }
        if self.strategies.is_empty() {
            return Err(Error::invalid("no strategy selected"));
        }
        if self.multiplicity < 1 {
            return Err(Error::invalid("N must be >= 1"));
        }
        if matches!(self.model, StreamModel::Explicit(_)) {
            return Err(Error::invalid("sweeps need a generative stream model"));
        }
        Ok(())
    }
}

/// Parses `a:b:step` into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(Error::invalid(format!("grid `{spec}` is not a:b:step")));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::invalid(format!("grid `{spec}`: {e}")))
    };
    let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
    if step.is_nan() || step <= 0.0 || b < a {
        return Err(Error::invalid(format!(
            "grid `{spec}` needs step > 0 and a <= b"
        )));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    // grid points are a + i·step, rounded to drop accumulation noise
    Ok((0..=count)
        .map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

/// Runs `f` on a dedicated pool of `jobs` workers (default: all cores).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Error::invalid("--jobs must be >= 1"));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Mean and sample standard deviation (`None` below two values).
pub(crate) fn mean_std(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Some(var.sqrt()))
}
