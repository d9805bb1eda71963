use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean_std, DEFAULT_BIN_WIDTH};
use crate::error::{Error, Result};
use crate::hypergraph::{gen_2regular_3uniform, gen_dual_complete_r, gen_erdos_renyi, Hypergraph};
use crate::process::{self, ErrorReport, Histogram, Strategy};
use crate::seed;
use crate::streams::{StreamModel, StreamSpec};

/// Exact check of `Σ_e R_e ≥ exc(G) / 2` for a graph run under the
/// N-balanced model, as `2·Σ_e (c_e − N) ≥ N·(|E| − |V|)` in integers.
pub fn excess_bound_holds(total_excess: u128, multiplicity: u64, graph_excess: i64) -> bool {
    let lhs = 2 * total_excess as i128;
    let rhs = multiplicity as i128 * graph_excess as i128;
    lhs >= rhs
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionConfig {
    pub k: usize,
    pub lambda: f64,
    pub n: usize,
    #[serde(rename = "N")]
    pub multiplicity: u64,
    pub model: StreamModel,
    pub strategy: Strategy,
    pub bin_width: f64,
    pub seed: u64,
}

impl DistributionConfig {
    /// CU under N-uniform input with the default bin width.
    pub fn new(k: usize, lambda: f64, n: usize, multiplicity: u64, seed: u64) -> Self {
        DistributionConfig {
            k,
            lambda,
            n,
            multiplicity,
            model: StreamModel::Uniform,
            strategy: Strategy::Cu,
            bin_width: DEFAULT_BIN_WIDTH,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    /// Position on the randomized display axis.
    pub display_index: usize,
    pub edge_id: usize,
    pub o_e: u64,
    pub c_e: u64,
    pub r_e: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDistribution {
    pub rows: Vec<DistributionRow>,
    pub histogram: Histogram,
    pub report: ErrorReport,
}

impl ErrorDistribution {
    pub fn to_csv(&self, header: &str) -> String {
        use std::fmt::Write;
        let mut out = format!("{header}\ndisplay_index,edge_id,o_e,c_e,R_e\n");
        for r in &self.rows {
            let re = r.r_e.map_or_else(String::new, |x| x.to_string());
            writeln!(
                out,
                "{},{},{},{},{}",
                r.display_index, r.edge_id, r.o_e, r.c_e, re
            )
            .unwrap();
        }
        out
    }
}

/// Per-edge errors of a single random instance, in a random display order.
pub fn error_distribution(config: &DistributionConfig) -> Result<ErrorDistribution> {
    if config.bin_width.is_nan() || config.bin_width <= 0.0 {
        return Err(Error::invalid("histogram bin width must be positive"));
    }
    let m = (config.lambda * config.n as f64).round() as usize;
    if m == 0 {
        return Err(Error::invalid("lambda·n rounds to zero edges"));
    }
    let graph = gen_erdos_renyi(
        config.n,
        m,
        config.k,
        seed::derive(config.seed, "graph", &[]),
    )?;
    let spec = StreamSpec::new(
        config.model.clone(),
        config.multiplicity,
        seed::derive(config.seed, "stream", &[]),
    );
    let (report, _) = process::run::<u64>(&graph, &spec, config.strategy, false)?;

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut seed::rng(seed::derive(config.seed, "display", &[])));
    let rows = order
        .into_iter()
        .enumerate()
        .map(|(display_index, e)| {
            let edge = &report.edges[e];
            DistributionRow {
                display_index,
                edge_id: e,
                o_e: edge.occurrences,
                c_e: edge.counter.expect("no marked vertices"),
                r_e: edge.relative_error,
            }
        })
        .collect();
    Ok(ErrorDistribution {
        rows,
        histogram: report.histogram(config.bin_width),
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCheck {
    pub n: usize,
    pub r: usize,
    pub strategy: Strategy,
    pub measured_mean_r: f64,
    pub predicted_r: f64,
    pub mean_vertex_ratio: f64,
    pub min_vertex_ratio: f64,
    pub max_vertex_ratio: f64,
    pub predicted_vertex_ratio: f64,
}

/// Runs `strategy` on `K'_{n,r}` and compares the mean `R_e` and the vertex
/// ratios `c_v / N` with their limits: `(r−1)/(n−r+1)` and `n/(n−r+1)` for
/// CU, `r − 1` and `r` for CM.
pub fn dual_complete_check(
    n: usize,
    r: usize,
    multiplicity: u64,
    model: StreamModel,
    strategy: Strategy,
    seed: u64,
) -> Result<DualCheck> {
    let graph = gen_dual_complete_r(n, r)?;
    let spec = StreamSpec::new(model, multiplicity, seed);
    let (report, state) = process::run::<u64>(&graph, &spec, strategy, false)?;
    let errors: Vec<f64> = report.relative_errors().collect();
    let measured_mean_r = errors.iter().sum::<f64>() / errors.len() as f64;
    let ratios: Vec<f64> = state
        .counters
        .iter()
        .map(|&c| c as f64 / multiplicity as f64)
        .collect();
    let (predicted_r, predicted_vertex_ratio) = match strategy {
        Strategy::Cu => (
            (r - 1) as f64 / (n - r + 1) as f64,
            n as f64 / (n - r + 1) as f64,
        ),
        Strategy::Cm => ((r - 1) as f64, r as f64),
    };
    Ok(DualCheck {
        n,
        r,
        strategy,
        measured_mean_r,
        predicted_r,
        mean_vertex_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        min_vertex_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_vertex_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        predicted_vertex_ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularCheck {
    pub t: usize,
    pub errors: Vec<f64>,
    pub mean: f64,
    pub std_dev: Option<f64>,
}

/// Average `err_N` of `strategy` on independent 2-regular 3-uniform
/// hypergraphs of size `t`.
pub fn regular_core_check(
    t: usize,
    multiplicity: u64,
    model: StreamModel,
    strategy: Strategy,
    seed: u64,
    replicates: usize,
) -> Result<RegularCheck> {
    if replicates == 0 {
        return Err(Error::invalid("replicates must be >= 1"));
    }
    let errors: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let rep_seed = seed::derive(seed, "replicate", &[rep]);
            let graph = gen_2regular_3uniform(t, seed::derive(rep_seed, "graph", &[]))?;
            let spec = StreamSpec::new(
                model.clone(),
                multiplicity,
                seed::derive(rep_seed, "stream", &[]),
            );
            Ok(process::run::<u64>(&graph, &spec, strategy, false)?
                .0
                .err_unweighted)
        })
        .collect::<Result<_>>()?;
    let (mean, std_dev) = mean_std(&errors);
    Ok(RegularCheck {
        t,
        errors,
        mean,
        std_dev,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmRateCheck {
    pub k: usize,
    pub lambda: f64,
    pub n: usize,
    pub per_replicate: Vec<f64>,
    pub frequency: f64,
    /// `(1 − e^{−kλ})^k`
    pub predicted: f64,
}

/// Fraction of edges whose vertices all have another incident edge (the
/// edges on which regular CM errs), against `(1 − e^{−kλ})^k`.
pub fn cm_error_rate_check(
    k: usize,
    lambda: f64,
    n: usize,
    seed: u64,
    replicates: usize,
) -> Result<CmRateCheck> {
    if replicates == 0 {
        return Err(Error::invalid("replicates must be >= 1"));
    }
    let m = (lambda * n as f64).round() as usize;
    let per_replicate: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let graph = gen_erdos_renyi(n, m, k, seed::derive(seed, "replicate", &[rep]))?;
            Ok(all_shared_fraction(&graph))
        })
        .collect::<Result<_>>()?;
    Ok(CmRateCheck {
        k,
        lambda,
        n,
        frequency: per_replicate.iter().sum::<f64>() / replicates as f64,
        per_replicate,
        predicted: (1.0 - (-(k as f64) * lambda).exp()).powi(k as i32),
    })
}

fn all_shared_fraction(graph: &Hypergraph) -> f64 {
    if graph.m() == 0 {
        return 0.0;
    }
    let deg = graph.degrees();
    let hit = graph
        .edges()
        .filter(|e| e.iter().all(|&v| deg[v] >= 2))
        .count();
    hit as f64 / graph.m() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excess_bound_arithmetic() {
        assert!(excess_bound_holds(0, 10, -5));
        assert!(excess_bound_holds(5, 10, 1));
        assert!(!excess_bound_holds(4, 10, 1));
    }

    #[test]
    fn cm_on_dual_is_exact_under_balanced() {
        for (n, r) in [(6, 2), (6, 3)] {
            let c = dual_complete_check(n, r, 30, StreamModel::Balanced, Strategy::Cm, 1).unwrap();
            assert_eq!(c.measured_mean_r, (r - 1) as f64);
            assert_eq!(c.min_vertex_ratio, r as f64);
            assert_eq!(c.max_vertex_ratio, r as f64);
        }
    }

    #[test]
    fn cm_errors_are_integers_at_n1() {
        let mut c = DistributionConfig::new(3, 1.0, 60, 1, 5);
        c.strategy = Strategy::Cm;
        c.model = StreamModel::Balanced;
        let d = error_distribution(&c).unwrap();
        assert_eq!(d.rows.len(), 60);
        assert!(d.rows.iter().all(|r| r.r_e.unwrap().fract() == 0.0));
        let mut ids: Vec<usize> = d.rows.iter().map(|r| r.edge_id).collect();
        assert_ne!(ids, (0..60).collect::<Vec<_>>());
        ids.sort();
        assert_eq!(ids, (0..60).collect::<Vec<_>>());
    }

    #[test]
    fn cm_rate_vanishes_at_low_density() {
        let c = cm_error_rate_check(3, 0.01, 1000, 3, 3).unwrap();
        assert!(c.frequency < 0.01, "{}", c.frequency);
        assert!(c.predicted < 0.001);
    }

    #[test]
    fn regular_cm_error_is_exactly_one() {
        let c = regular_core_check(20, 10, StreamModel::Balanced, Strategy::Cm, 4, 3).unwrap();
        assert!(c.errors.iter().all(|&e| e == 1.0));
    }
}
