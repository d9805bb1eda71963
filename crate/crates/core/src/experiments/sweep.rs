use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean_std, metadata_header, ExperimentConfig};
use crate::error::{Error, Result};
use crate::hypergraph::{components, gen_erdos_renyi, peel};
use crate::process::{self, Strategy};
use crate::seed;
use crate::streams::{StreamModel, StreamSpec};

/// One (grid point, strategy, replicate) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    #[serde(rename = "N")]
    pub multiplicity: u64,
    pub model: String,
    pub strategy: Strategy,
    pub replicate: usize,
    /// Replicate seed; graph and stream seeds are derived from it.
    pub seed: u64,
    pub err_unweighted: f64,
    pub err_weighted: f64,
    pub core_fraction: f64,
    pub giant_excess: i64,
    /// `Σ_e (c_e − o_e)`, kept for exact checks; not part of the CSV.
    #[serde(skip)]
    pub total_excess: u128,
    /// `|E| − |V|` of the whole hypergraph; not part of the CSV.
    #[serde(skip)]
    pub graph_excess: i64,
}

pub const SWEEP_CSV_HEADER: &str =
    "k,n,m,lambda,N,model,strategy,replicate,seed,err_unweighted,err_weighted,core_fraction,giant_excess";

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.k,
            self.n,
            self.m,
            self.lambda,
            self.multiplicity,
            self.model,
            self.strategy,
            self.replicate,
            self.seed,
            self.err_unweighted,
            self.err_weighted,
            self.core_fraction,
            self.giant_excess
        )
    }

    pub fn to_csv(rows: &[SweepRow], root_seed: u64) -> String {
        let mut out = format!("{}\n{SWEEP_CSV_HEADER}\n", metadata_header(root_seed));
        for r in rows {
            writeln!(out, "{}", r.csv_line()).unwrap();
        }
        out
    }
}

/// Per (model, λ, strategy) aggregate over replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationPoint {
    pub model: String,
    pub lambda: f64,
    pub strategy: Strategy,
    pub replicates: usize,
    pub mean_unweighted: f64,
    pub std_unweighted: Option<f64>,
    pub mean_weighted: f64,
    pub std_weighted: Option<f64>,
}

impl ConcentrationPoint {
    /// Groups consecutive rows sharing (model, λ, strategy).
    pub fn summarize(rows: &[SweepRow]) -> Vec<ConcentrationPoint> {
        rows.chunk_by(|a, b| a.model == b.model && a.lambda == b.lambda && a.strategy == b.strategy)
            .map(|group| {
                let unweighted: Vec<f64> = group.iter().map(|r| r.err_unweighted).collect();
                let weighted: Vec<f64> = group.iter().map(|r| r.err_weighted).collect();
                let (mean_unweighted, std_unweighted) = mean_std(&unweighted);
                let (mean_weighted, std_weighted) = mean_std(&weighted);
                ConcentrationPoint {
                    model: group[0].model.clone(),
                    lambda: group[0].lambda,
                    strategy: group[0].strategy,
                    replicates: group.len(),
                    mean_unweighted,
                    std_unweighted,
                    mean_weighted,
                    std_weighted,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub header: String,
    pub config: ExperimentConfig,
    pub points: Vec<ConcentrationPoint>,
}

impl SweepSummary {
    pub fn new(config: &ExperimentConfig, rows: &[SweepRow]) -> Self {
        SweepSummary {
            header: metadata_header(config.root_seed),
            config: config.clone(),
            points: ConcentrationPoint::summarize(rows),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Replicated λ-sweep: for every grid point and replicate a fresh
/// Erdős–Rényi hypergraph, one stream shared by all strategies, and the
/// peel/component statistics of the graph.
///
/// Rows are ordered by (grid point, strategy, replicate).
pub fn sweep_lambda(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    sweep_models(config, std::slice::from_ref(&config.model))
}

/// Replicates of a sweep with per-point sample standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationTable {
    pub rows: Vec<SweepRow>,
    pub points: Vec<ConcentrationPoint>,
}

impl ConcentrationTable {
    /// `model,lambda,strategy,replicates,mean,std_dev`; `NaN` marks a
    /// single-replicate point.
    pub fn points_csv(&self, root_seed: u64) -> String {
        let mut out = format!(
            "{}\nmodel,lambda,strategy,replicates,mean,std_dev\n",
            metadata_header(root_seed)
        );
        for p in &self.points {
            let std = p
                .std_unweighted
                .map_or_else(|| "NaN".to_string(), |s| s.to_string());
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.model, p.lambda, p.strategy, p.replicates, p.mean_unweighted, std
            )
            .unwrap();
        }
        out
    }
}

pub fn concentration(config: &ExperimentConfig) -> Result<ConcentrationTable> {
    let rows = sweep_lambda(config)?;
    let points = ConcentrationPoint::summarize(&rows);
    Ok(ConcentrationTable { rows, points })
}

/// Zipf sweep over `betas`; each replicate's hypergraph is shared by all
/// skewness values. The weighted error is the quantity of interest.
///
/// Rows are ordered by (β, grid point, strategy, replicate).
pub fn zipf_sweep(config: &ExperimentConfig, betas: &[f64]) -> Result<Vec<SweepRow>> {
    config.validate()?;
    if betas.is_empty() {
        return Err(Error::invalid("no Zipf skewness given"));
    }
    let models: Vec<StreamModel> = betas
        .iter()
        .map(|&beta| StreamModel::Zipf { beta })
        .collect();
    sweep_models(config, &models)
}

fn sweep_models(config: &ExperimentConfig, models: &[StreamModel]) -> Result<Vec<SweepRow>> {
    let tasks: Vec<(usize, usize)> = (0..config.lambdas.len())
        .flat_map(|g| (0..config.replicates).map(move |r| (g, r)))
        .collect();

    // results[task][model][strategy]
    let results: Vec<Vec<Vec<SweepRow>>> = tasks
        .par_iter()
        .map(|&(g, r)| run_task(config, models, g, r))
        .collect::<Result<_>>()?;

    let reps = config.replicates;
    let mut rows = Vec::with_capacity(results.len() * models.len() * config.strategies.len());
    #[allow(clippy::needless_range_loop)]
    for mi in 0..models.len() {
        for g in 0..config.lambdas.len() {
            for si in 0..config.strategies.len() {
                for r in 0..reps {
                    rows.push(results[g * reps + r][mi][si].clone());
                }
            }
        }
    }
    Ok(rows)
}

fn run_task(
    config: &ExperimentConfig,
    models: &[StreamModel],
    grid: usize,
    replicate: usize,
) -> Result<Vec<Vec<SweepRow>>> {
    let lambda = config.lambdas[grid];
    let m = config.edge_count(lambda);
    let rep_seed = seed::derive(
        config.root_seed,
        "replicate",
        &[grid as u64, replicate as u64],
    );
    let graph = gen_erdos_renyi(config.n, m, config.k, seed::derive(rep_seed, "graph", &[]))?;
    let core_fraction = peel(&graph, &[])?.core_fraction();
    let giant_excess = components(&graph).giant_excess();
    let graph_excess = m as i64 - config.n as i64;
    let stream_seed = seed::derive(rep_seed, "stream", &[]);

    models
        .iter()
        .map(|model| {
            let spec = StreamSpec::new(model.clone(), config.multiplicity, stream_seed);
            config
                .strategies
                .iter()
                .map(|&strategy| {
                    let (report, _) =
                        process::run::<u64>(&graph, &spec, strategy, config.check_invariants)?;
                    Ok(SweepRow {
                        k: config.k,
                        n: config.n,
                        m,
                        lambda,
                        multiplicity: config.multiplicity,
                        model: model.to_string(),
                        strategy,
                        replicate,
                        seed: rep_seed,
                        err_unweighted: report.err_unweighted,
                        err_weighted: report.err_weighted,
                        core_fraction,
                        giant_excess,
                        total_excess: report.total_excess(),
                        graph_excess,
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(strategies: Vec<Strategy>) -> ExperimentConfig {
        ExperimentConfig {
            n: 60,
            multiplicity: 20,
            replicates: 1,
            strategies,
            ..ExperimentConfig::new(3, vec![0.5])
        }
    }

    #[test]
    fn one_point_one_replicate_gives_one_row_per_strategy() {
        assert_eq!(
            sweep_lambda(&small(Strategy::BOTH.to_vec())).unwrap().len(),
            2
        );
        assert_eq!(sweep_lambda(&small(vec![Strategy::Cu])).unwrap().len(), 1);
    }

    #[test]
    fn row_order_and_csv() {
        let config = ExperimentConfig {
            lambdas: vec![0.3, 0.6],
            replicates: 2,
            ..small(Strategy::BOTH.to_vec())
        };
        let rows = sweep_lambda(&config).unwrap();
        let keys: Vec<(f64, Strategy, usize)> = rows
            .iter()
            .map(|r| (r.lambda, r.strategy, r.replicate))
            .collect();
        assert_eq!(keys[0], (0.3, Strategy::Cm, 0));
        assert_eq!(keys[1], (0.3, Strategy::Cm, 1));
        assert_eq!(keys[2], (0.3, Strategy::Cu, 0));
        assert_eq!(keys[4], (0.6, Strategy::Cm, 0));
        let csv = SweepRow::to_csv(&rows, config.root_seed);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# cu-sketch-lab v"));
        assert_eq!(lines.next().unwrap(), SWEEP_CSV_HEADER);
        assert_eq!(lines.count(), 8);
    }

    #[test]
    fn single_replicate_std_is_missing() {
        let t = concentration(&small(vec![Strategy::Cu])).unwrap();
        assert_eq!(t.points.len(), 1);
        assert_eq!(t.points[0].std_unweighted, None);
        assert!(t.points_csv(1).lines().nth(2).unwrap().ends_with(",NaN"));
    }

    #[test]
    fn zipf_rows_group_by_beta() {
        let rows = zipf_sweep(&small(vec![Strategy::Cu]), &[0.0, 0.7]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].model, "zipf:0");
        assert_eq!(rows[1].model, "zipf:0.7");
        assert_eq!(rows[0].seed, rows[1].seed);
    }
}
