use super::CounterProcess;
use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Edge-counter bookkeeping of one CU step on a dual complete graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRecord {
    /// Step clock before the step.
    pub t: u64,
    pub drawn: usize,
    /// Edges with minimal `c_e` before the step.
    pub minedges: Vec<usize>,
    /// `min_e c_e` before the step.
    pub p: u64,
    /// `max_e c_e` before the step.
    pub q: u64,
    /// Edges whose counter increased during the step.
    pub increased: Vec<usize>,
}

/// Audits CU steps on `K'_n`: at every step at least two edges share the
/// minimum, only the drawn edge's counter moves unless it is one of exactly
/// two minimal edges (then both move), and `Σ_e c_e = t + p`.
pub struct DualAuditor<'h> {
    graph: &'h Hypergraph,
}

impl<'h> DualAuditor<'h> {
    /// Accepts only hypergraphs shaped like `K'_n` (`n ≥ 3`): every vertex
    /// of degree 2 and every two edges sharing exactly one vertex.
    pub fn new(graph: &'h Hypergraph) -> Result<Self> {
        let m = graph.m();
        if m < 3 || graph.degrees().iter().any(|&d| d != 2) {
            return Err(Error::invalid(
                "audit needs a dual complete graph with n >= 3",
            ));
        }
        let mut shared = vec![0usize; m * m];
        let inc = graph.incidence();
        for v in 0..graph.n() {
            let &[a, b] = inc.of(v) else { unreachable!() };
            shared[a * m + b] += 1;
            shared[b * m + a] += 1;
        }
        for a in 0..m {
            for b in 0..m {
                if a != b && shared[a * m + b] != 1 {
                    return Err(Error::invalid(format!(
                        "edges {a} and {b} share {} vertices, expected 1",
                        shared[a * m + b]
                    )));
                }
            }
        }
        Ok(DualAuditor { graph })
    }

    /// Performs one CU step on `process` and checks it.
    pub fn audit_step<C: Counter>(
        &self,
        process: &mut CounterProcess<'_, C>,
        e: usize,
    ) -> Result<AuditRecord> {
        assert!(
            std::ptr::eq(process.graph(), self.graph),
            "process runs on another graph"
        );
        let t = process.t();
        let before = edge_counters(process);
        let p = *before.iter().min().unwrap();
        let q = *before.iter().max().unwrap();
        let minedges: Vec<usize> = (0..before.len()).filter(|&i| before[i] == p).collect();

        let fail = |detail: String| Error::InvariantViolation {
            step: t,
            detail: format!("{detail}; edge counters before step: {before:?}"),
        };
        if minedges.len() < 2 {
            return Err(fail(format!("only {} minimal edge(s)", minedges.len())));
        }
        let sum: u64 = before.iter().sum();
        if sum != t + p {
            return Err(fail(format!("Σ c_e = {sum} but t + p = {}", t + p)));
        }

        process.step_cu(e)?;
        let after = edge_counters(process);
        let mut increased = Vec::new();
        for i in 0..after.len() {
            match after[i].checked_sub(before[i]) {
                Some(0) => {}
                Some(1) => increased.push(i),
                _ => {
                    return Err(fail(format!(
                        "edge {i} moved from {} to {}",
                        before[i], after[i]
                    )))
                }
            }
        }
        let mut expected = vec![e];
        if minedges.len() == 2 && minedges.contains(&e) {
            expected = minedges.clone();
        }
        if increased != expected {
            return Err(fail(format!(
                "drawing edge {e} increased {increased:?}, expected {expected:?}"
            )));
        }
        let p_after = *after.iter().min().unwrap();
        let sum_after: u64 = after.iter().sum();
        if sum_after != t + 1 + p_after {
            return Err(fail(format!(
                "after step Σ c_e = {sum_after} but t + p = {}",
                t + 1 + p_after
            )));
        }
        Ok(AuditRecord {
            t,
            drawn: e,
            minedges,
            p,
            q,
            increased,
        })
    }
}

fn edge_counters<C: Counter>(process: &CounterProcess<'_, C>) -> Vec<u64> {
    (0..process.graph().m())
        .map(|e| process.edge_counter(e).to_u64())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{gen_dual_complete, gen_erdos_renyi};

    #[test]
    fn first_step_moves_only_drawn_edge() {
        let h = gen_dual_complete(5).unwrap();
        let audit = DualAuditor::new(&h).unwrap();
        let mut p = CounterProcess::<u64>::new(&h);
        let rec = audit.audit_step(&mut p, 2).unwrap();
        assert_eq!(rec.minedges.len(), 5);
        assert_eq!(rec.increased, vec![2]);
        assert_eq!((rec.p, rec.q, rec.t), (0, 0, 0));
    }

    #[test]
    fn two_minimal_edges_move_together() {
        let h = gen_dual_complete(3).unwrap();
        let audit = DualAuditor::new(&h).unwrap();
        let mut p = CounterProcess::<u64>::new(&h);
        // after drawing 0: edge counters (1, 0, 0) → minedges {1, 2}
        audit.audit_step(&mut p, 0).unwrap();
        let rec = audit.audit_step(&mut p, 1).unwrap();
        assert_eq!(rec.minedges, vec![1, 2]);
        assert_eq!(rec.increased, vec![1, 2]);
    }

    #[test]
    fn rejects_other_graphs() {
        let h = gen_erdos_renyi(10, 8, 2, 1).unwrap();
        assert!(DualAuditor::new(&h).is_err());
        assert!(DualAuditor::new(&gen_dual_complete(2).unwrap()).is_err());
    }
}
