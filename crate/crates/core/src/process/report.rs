use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{CounterState, Strategy};
use crate::counter::Counter;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeError {
    pub edge_id: usize,
    /// `o_e`
    pub occurrences: u64,
    /// `c_e`; `None` when every vertex of the edge is marked.
    pub counter: Option<u64>,
    /// `R_e = (c_e − o_e) / o_e`; `None` when `o_e = 0` or `c_e = +∞`.
    pub relative_error: Option<f64>,
}

/// Per-edge errors and their aggregates at the end of a run.
///
/// `err_unweighted` averages `R_e` over the edges where it is defined.
/// `err_weighted` is `Σ (c_e − o_e) / (m·N)` over finite edges, where `m·N`
/// is the stream length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub edges: Vec<EdgeError>,
    pub stream_len: u64,
    pub err_unweighted: f64,
    pub err_weighted: f64,
    pub zero_occurrence_edges: usize,
    pub infinite_edges: usize,
}

impl ErrorReport {
    pub fn from_state<C: Counter>(h: &Hypergraph, state: &CounterState<C>) -> Self {
        let m = h.m();
        let mut edges = Vec::with_capacity(m);
        // Σ (c_e − o_e), grouped by o_e so that equal-occurrence runs divide once.
        let mut excess_by_occ: BTreeMap<u64, u128> = BTreeMap::new();
        let mut total_excess: u128 = 0;
        let mut zero_occurrence_edges = 0;
        let mut infinite_edges = 0;

        for (e, edge) in h.edges().enumerate() {
            let ce = edge
                .iter()
                .map(|&v| state.counters[v])
                .min()
                .expect("edges are non-empty");
            let oe = state.occurrences[e];
            let (counter, relative_error) = if ce.is_infinite() {
                infinite_edges += 1;
                (None, None)
            } else {
                let ce = ce.to_u64();
                let excess = ce.saturating_sub(oe);
                total_excess += excess as u128;
                if oe == 0 {
                    zero_occurrence_edges += 1;
                    (Some(ce), None)
                } else {
                    *excess_by_occ.entry(oe).or_default() += excess as u128;
                    (Some(ce), Some(excess as f64 / oe as f64))
                }
            };
            edges.push(EdgeError {
                edge_id: e,
                occurrences: oe,
                counter,
                relative_error,
            });
        }

        let defined = m - zero_occurrence_edges - infinite_edges;
        let err_unweighted = if defined == 0 {
            0.0
        } else {
            excess_by_occ
                .iter()
                .map(|(&o, &s)| s as f64 / o as f64)
                .sum::<f64>()
                / defined as f64
        };
        let err_weighted = if state.t == 0 || m == 0 {
            0.0
        } else {
            let per_key = state.t as f64 / m as f64;
            total_excess as f64 / per_key / m as f64
        };

        ErrorReport {
            edges,
            stream_len: state.t,
            err_unweighted,
            err_weighted,
            zero_occurrence_edges,
            infinite_edges,
        }
    }

    pub fn relative_errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.iter().filter_map(|e| e.relative_error)
    }

    /// `Σ_e (c_e − o_e)` over finite edges.
    pub fn total_excess(&self) -> u128 {
        self.edges
            .iter()
            .filter_map(|e| e.counter.map(|c| c.saturating_sub(e.occurrences) as u128))
            .sum()
    }

    pub fn histogram(&self, bin_width: f64) -> Histogram {
        Histogram::from_values(self.relative_errors(), bin_width)
    }

    /// `edge_id,o_e,c_e,R_e`; undefined cells are left empty, `+∞` is `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("edge_id,o_e,c_e,R_e\n");
        for e in &self.edges {
            let c = e
                .counter
                .map_or_else(|| "inf".to_string(), |c| c.to_string());
            let r = e.relative_error.map_or_else(String::new, |r| r.to_string());
            writeln!(out, "{},{},{},{}", e.edge_id, e.occurrences, c, r).unwrap();
        }
        out
    }
}

/// Summary object written next to a per-edge CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "N")]
    pub multiplicity: u64,
    pub model: String,
    pub strategy: Strategy,
    pub seed: u64,
    pub err_unweighted: f64,
    pub err_weighted: f64,
    pub zero_occurrence_edges: usize,
}

impl RunSummary {
    pub fn new(
        h: &Hypergraph,
        report: &ErrorReport,
        multiplicity: u64,
        model: impl ToString,
        strategy: Strategy,
        seed: u64,
    ) -> Self {
        RunSummary {
            n: h.n(),
            m: h.m(),
            k: h.k(),
            multiplicity,
            model: model.to_string(),
            strategy,
            seed,
            err_unweighted: report.err_unweighted,
            err_weighted: report.err_weighted,
            zero_occurrence_edges: report.zero_occurrence_edges,
        }
    }
}

/// Fixed-width histogram on `[0, ∞)`; bin `i` covers `[i·w, (i+1)·w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn from_values(values: impl IntoIterator<Item = f64>, bin_width: f64) -> Self {
        assert!(bin_width > 0.0, "bin width must be positive");
        let mut counts: Vec<u64> = Vec::new();
        let mut total = 0;
        for x in values {
            // absorb representation error so exact multiples land in their own bin
            let bin = ((x.max(0.0) / bin_width) + 1e-9).floor() as usize;
            if bin >= counts.len() {
                counts.resize(bin + 1, 0);
            }
            counts[bin] += 1;
            total += 1;
        }
        Histogram {
            bin_width,
            counts,
            total,
        }
    }

    pub fn bin_center(&self, bin: usize) -> f64 {
        (bin as f64 + 0.5) * self.bin_width
    }

    /// Fullest bin (lowest index on ties) and its count.
    pub fn peak(&self) -> Option<(usize, u64)> {
        self.counts.iter().enumerate().fold(
            None,
            |best: Option<(usize, u64)>, (i, &c)| match best {
                Some((_, bc)) if bc >= c => best,
                _ if c == 0 => best,
                _ => Some((i, c)),
            },
        )
    }

    /// Dominant mode: the centre of mass of the fullest window of
    /// `2·half_width + 1` adjacent bins, and the fraction of values in it.
    pub fn dominant_mode(&self, half_width: usize) -> Option<(f64, f64)> {
        if self.total == 0 {
            return None;
        }
        let span = 2 * half_width + 1;
        let mut best = (0usize, 0u64);
        let mut window: u64 = 0;
        for i in 0..self.counts.len() + span {
            if i < self.counts.len() {
                window += self.counts[i];
            }
            if i >= span {
                window -= self.counts[i - span];
            }
            if window > best.1 {
                best = (i, window);
            }
        }
        let hi = best.0.min(self.counts.len() - 1);
        let lo = (best.0 + 1).saturating_sub(span);
        let weighted: f64 = (lo..=hi)
            .map(|b| self.bin_center(b) * self.counts[b] as f64)
            .sum();
        Some((weighted / best.1 as f64, best.1 as f64 / self.total as f64))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            let lo = i as f64 * self.bin_width;
            writeln!(out, "{},{},{}", lo, lo + self.bin_width, c).unwrap();
        }
        out
    }
}
