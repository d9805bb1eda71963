//! The CM and CU counter processes on a hypergraph.
//!
//! Each step draws one edge (a key). CM increments every incident vertex
//! counter; CU increments only the incident counters equal to the incident
//! minimum. The edge counter `c_e` is the minimum over its vertices.

mod audit;
mod report;

pub use audit::{AuditRecord, DualAuditor};
pub use report::{EdgeError, ErrorReport, Histogram, RunSummary};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::counter::{Counter, Extended};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Incidence};
use crate::streams::StreamSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Regular Count-Min: increment every hashed counter.
    Cm,
    /// Conservative update: increment only the minimal hashed counters.
    Cu,
}

impl Strategy {
    pub const BOTH: [Strategy; 2] = [Strategy::Cm, Strategy::Cu];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Cm => "cm",
            Strategy::Cu => "cu",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cm" => Ok(Strategy::Cm),
            "cu" => Ok(Strategy::Cu),
            other => Err(Error::invalid(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Vertex counters, edge occurrence counts and the step clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterState<C: Counter> {
    pub counters: Vec<C>,
    pub occurrences: Vec<u64>,
    pub t: u64,
}

impl<C: Counter> CounterState<C> {
    /// All-zero state, or the given initial assignment.
    pub fn init(h: &Hypergraph, initial: Option<&[Extended]>) -> Result<Self> {
        let counters = match initial {
            None => vec![C::zero(); h.n()],
            Some(values) => {
                if values.len() != h.n() {
                    return Err(Error::AssignmentLength {
                        expected: h.n(),
                        got: values.len(),
                    });
                }
                values.iter().map(|v| v.to_counter()).collect()
            }
        };
        Ok(CounterState {
            counters,
            occurrences: vec![0; h.m()],
            t: 0,
        })
    }

    pub fn counter(&self, v: usize) -> Extended {
        Extended::from_counter(self.counters[v])
    }
}

/// A counter state bound to the hypergraph it runs on.
#[derive(Debug, Clone)]
pub struct CounterProcess<'h, C: Counter> {
    graph: &'h Hypergraph,
    state: CounterState<C>,
    marked: Vec<usize>,
    zero_start: bool,
}

impl<'h, C: Counter> CounterProcess<'h, C> {
    pub fn new(graph: &'h Hypergraph) -> Self {
        Self::from_state(
            graph,
            CounterState::init(graph, None).expect("no assignment"),
        )
    }

    pub fn with_initial(graph: &'h Hypergraph, initial: &[Extended]) -> Result<Self> {
        Ok(Self::from_state(
            graph,
            CounterState::init(graph, Some(initial))?,
        ))
    }

    /// Counters set to `+∞` on `marked`, zero elsewhere.
    pub fn with_marked(graph: &'h Hypergraph, marked: &[usize]) -> Result<Self> {
        let mut initial = vec![Extended::Finite(0); graph.n()];
        for &v in marked {
            if v >= graph.n() {
                return Err(Error::VertexOutOfRange {
                    id: v,
                    n: graph.n(),
                });
            }
            initial[v] = Extended::Infinite;
        }
        Self::with_initial(graph, &initial)
    }

    fn from_state(graph: &'h Hypergraph, state: CounterState<C>) -> Self {
        let marked = (0..graph.n())
            .filter(|&v| state.counters[v].is_infinite())
            .collect();
        let zero_start = state.t == 0
            && state
                .counters
                .iter()
                .all(|&c| c.is_zero() || c.is_infinite());
        CounterProcess {
            graph,
            state,
            marked,
            zero_start,
        }
    }

    pub fn graph(&self) -> &'h Hypergraph {
        self.graph
    }

    pub fn state(&self) -> &CounterState<C> {
        &self.state
    }

    pub fn into_state(self) -> CounterState<C> {
        self.state
    }

    pub fn t(&self) -> u64 {
        self.state.t
    }

    #[inline]
    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.graph.m() {
            return Err(Error::EdgeOutOfRange {
                index: e,
                m: self.graph.m(),
            });
        }
        Ok(())
    }

    /// `c_e`: minimum counter over the vertices of `e`.
    #[inline]
    pub fn edge_counter(&self, e: usize) -> C {
        self.graph
            .edge(e)
            .iter()
            .map(|&v| self.state.counters[v])
            .min()
            .expect("edges are non-empty")
    }

    pub fn step(&mut self, strategy: Strategy, e: usize) -> Result<()> {
        match strategy {
            Strategy::Cm => self.step_cm(e),
            Strategy::Cu => self.step_cu(e),
        }
    }

    pub fn step_cu(&mut self, e: usize) -> Result<()> {
        self.check_edge(e)?;
        let min = self.edge_counter(e);
        if !min.is_infinite() {
            let bumped = min.bump();
            for &v in self.graph.edge(e) {
                let c = &mut self.state.counters[v];
                if *c == min {
                    *c = bumped;
                }
            }
        }
        self.state.occurrences[e] += 1;
        self.state.t += 1;
        Ok(())
    }

    pub fn step_cm(&mut self, e: usize) -> Result<()> {
        self.check_edge(e)?;
        for &v in self.graph.edge(e) {
            let c = &mut self.state.counters[v];
            *c = c.bump();
        }
        self.state.occurrences[e] += 1;
        self.state.t += 1;
        Ok(())
    }

    /// Applies `keys` in order. With `check_invariants`, the invariants of
    /// [`Self::check_invariants`] are verified after every step and the
    /// first violation aborts with its step index.
    pub fn run_keys<I>(&mut self, keys: I, strategy: Strategy, check_invariants: bool) -> Result<()>
    where
        I: IntoIterator<Item = u32>,
    {
        let incidence = check_invariants.then(|| self.graph.incidence());
        let start = check_invariants.then(|| self.state.clone());
        for key in keys {
            self.step(strategy, key as usize)?;
            if let (Some(inc), Some(start)) = (&incidence, &start) {
                if let Err(detail) = self.check_invariants_with(strategy, inc, start) {
                    return Err(Error::InvariantViolation {
                        step: self.state.t,
                        detail,
                    });
                }
            }
        }
        Ok(())
    }

    /// Checks the per-step invariants of `strategy` against the current state.
    ///
    /// Both strategies: `c_e >= o_e` for every edge and marked counters stay
    /// `+∞`. CU from a zero start: every unmarked vertex with an incident
    /// edge has one whose `c_e` equals `c_v`. CM: every finite counter equals
    /// its initial value plus the occurrences of its incident edges.
    pub fn check_invariants(
        &self,
        strategy: Strategy,
        initial: &CounterState<C>,
    ) -> std::result::Result<(), String> {
        self.check_invariants_with(strategy, &self.graph.incidence(), initial)
    }

    fn check_invariants_with(
        &self,
        strategy: Strategy,
        inc: &Incidence,
        initial: &CounterState<C>,
    ) -> std::result::Result<(), String> {
        let counters = &self.state.counters;
        for e in 0..self.graph.m() {
            let ce = self.edge_counter(e);
            let oe = self.state.occurrences[e];
            if !ce.is_infinite() && ce.to_u64() < oe {
                return Err(format!("edge {e}: c_e = {} < o_e = {oe}", ce.to_u64()));
            }
        }
        for &v in &self.marked {
            if !counters[v].is_infinite() {
                return Err(format!("marked vertex {v} lost its +inf counter"));
            }
        }
        match strategy {
            Strategy::Cu if self.zero_start => {
                for (v, &cv) in counters.iter().enumerate() {
                    if cv.is_infinite() || inc.degree(v) == 0 {
                        continue;
                    }
                    if !inc.of(v).iter().any(|&e| self.edge_counter(e) == cv) {
                        return Err(format!(
                            "vertex {v} (c_v = {}) has no incident edge with c_e = c_v",
                            cv.to_u64()
                        ));
                    }
                }
            }
            Strategy::Cu => {}
            Strategy::Cm => {
                for (v, &cv) in counters.iter().enumerate() {
                    if cv.is_infinite() {
                        continue;
                    }
                    let expect = initial.counters[v].to_u64()
                        + inc
                            .of(v)
                            .iter()
                            .map(|&e| self.state.occurrences[e])
                            .sum::<u64>();
                    if cv != C::from_u64(expect) {
                        return Err(format!(
                            "vertex {v}: CM counter {} != initial + incident occurrences {expect}",
                            cv.to_u64()
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport::from_state(self.graph, &self.state)
    }
}

/// Runs `strategy` from an all-zero state over the stream and reports the
/// per-edge errors.
pub fn run<C: Counter>(
    h: &Hypergraph,
    stream: &StreamSpec,
    strategy: Strategy,
    check_invariants: bool,
) -> Result<(ErrorReport, CounterState<C>)> {
    let mut process = CounterProcess::<C>::new(h);
    process.run_keys(stream.keys(h.m())?, strategy, check_invariants)?;
    Ok((process.report(), process.into_state()))
}
