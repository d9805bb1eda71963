//! Edge-list text format: a header line `k n m`, then one edge per line as
//! space-separated vertex ids. `#` starts a comment.

use std::fmt::Write;

use super::Hypergraph;
use crate::error::{Error, Result};

pub fn write_edge_list(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", h.k(), h.n(), h.m()).unwrap();
    for edge in h.edges() {
        let line: Vec<String> = edge.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

/// Parses the edge-list format. Edge lines may carry fewer than `k` ids
/// (hash hypergraphs with colliding positions); repeated edges are kept.
pub fn parse_edge_list(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing `k n m` header".into(),
    })?;
    let fields = parse_ids(hline, header)?;
    let [k, n, m] = fields[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header needs 3 fields, got {}", fields.len()),
        });
    };

    let mut edges = Vec::with_capacity(m);
    for (lno, line) in lines {
        edges.push(parse_ids(lno, line)?);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Hypergraph::from_edges(n, k, edges)
}

fn parse_ids(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|e| Error::Parse {
                line,
                msg: format!("`{tok}`: {e}"),
            })
        })
        .collect()
}
