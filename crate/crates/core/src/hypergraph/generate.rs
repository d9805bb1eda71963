use std::collections::HashSet;

use rand::seq::{index, SliceRandom};

use super::Hypergraph;
use crate::error::{Error, Result};
use crate::seed;

/// Reshuffles allowed before the configuration model gives up.
pub const REGULAR_RETRY_BUDGET: usize = 1000;

/// Enumerate all k-subsets instead of rejection sampling when there are at
/// most this many and the request covers more than half of them.
const DENSE_ENUMERATION_LIMIT: u128 = 1 << 20;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiply.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Uniform random `k`-uniform hypergraph with `m` distinct edges on `n`
/// vertices (a uniform `m`-subset of all `k`-subsets of `[0, n)`).
pub fn gen_erdos_renyi(n: usize, m: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::invalid(format!(
            "edge order k = {k} must be at least 2"
        )));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "edge order k = {k} exceeds n = {n}"
        )));
    }
    let total = binomial(n, k);
    if m as u128 > total {
        return Err(Error::invalid(format!(
            "m = {m} exceeds the {total} possible {k}-edges on {n} vertices"
        )));
    }
    let mut rng = seed::rng(seed);

    if total <= DENSE_ENUMERATION_LIMIT && 2 * m as u128 > total {
        let all = k_subsets(n, k);
        let picked = index::sample(&mut rng, all.len(), m);
        let edges: Vec<&Vec<usize>> = picked.iter().map(|i| &all[i]).collect();
        return Hypergraph::from_edges(n, k, edges);
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let mut edge = index::sample(&mut rng, n, k).into_vec();
        edge.sort_unstable();
        if seen.insert(edge.clone()) {
            edges.push(edge);
        }
    }
    Hypergraph::from_edges(n, k, edges)
}

/// All `k`-subsets of `[0, n)` in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // rightmost position that can still advance
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Dual of the complete graph `K_n`.
///
/// Vertex `idx(i, j)` (lexicographic over pairs `i < j`) stands for the edge
/// `{i, j}` of `K_n`; edge `i` collects the pairs containing `i`.
pub fn gen_dual_complete(n: usize) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "dual complete graph needs n >= 2, got {n}"
        )));
    }
    let pair = |i: usize, j: usize| i * (2 * n - i - 1) / 2 + (j - i - 1);
    let edges = (0..n).map(|i| {
        (0..n)
            .filter(|&a| a != i)
            .map(|a| if a < i { pair(a, i) } else { pair(i, a) })
            .collect::<Vec<_>>()
    });
    Hypergraph::from_edges(n * (n - 1) / 2, n - 1, edges)
}

/// Dual of the complete `r`-uniform hypergraph `K_{n,r}`: `C(n, r)`
/// vertices (the `r`-subsets, lexicographic), `n` edges of order
/// `C(n-1, r-1)`, every vertex of degree `r`.
pub fn gen_dual_complete_r(n: usize, r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return Err(Error::invalid(format!(
            "base edge order r = {r} must be at least 2"
        )));
    }
    if r > n {
        return Err(Error::invalid(format!(
            "base edge order r = {r} exceeds n = {n}"
        )));
    }
    let subsets = k_subsets(n, r);
    let mut edges = vec![Vec::new(); n];
    for (idx, s) in subsets.iter().enumerate() {
        for &i in s {
            edges[i].push(idx);
        }
    }
    Hypergraph::from_edges(subsets.len(), binomial(n - 1, r - 1) as usize, edges)
}

/// 2-regular 3-uniform simple hypergraph on `3t` vertices with `2t` edges,
/// sampled by the configuration model: two stubs per vertex, shuffled and
/// cut into triples, reshuffling whenever a triple repeats a vertex or two
/// triples coincide.
pub fn gen_2regular_3uniform(t: usize, seed: u64) -> Result<Hypergraph> {
    if t == 0 {
        return Err(Error::invalid("size parameter t must be at least 1"));
    }
    let n = 3 * t;
    let mut rng = seed::rng(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v]).collect();
    'attempt: for _ in 0..REGULAR_RETRY_BUDGET {
        stubs.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(2 * t);
        let mut edges = Vec::with_capacity(2 * t);
        for chunk in stubs.chunks_exact(3) {
            let mut e = [chunk[0], chunk[1], chunk[2]];
            e.sort_unstable();
            if e[0] == e[1] || e[1] == e[2] || !seen.insert(e) {
                continue 'attempt;
            }
            edges.push(e);
        }
        return Hypergraph::from_edges(n, 3, edges);
    }
    Err(Error::RetryBudgetExhausted {
        what: "2-regular 3-uniform configuration model",
        attempts: REGULAR_RETRY_BUDGET,
    })
}
