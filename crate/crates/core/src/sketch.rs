//! Key-facing counting sketch with one shared counter array (the Spectral
//! Bloom layout): all `k` hash functions map into the same `n` cells.
//!
//! Hash function `i` is SipHash-1-3 keyed with `(hash_seed, i)` over the key
//! bytes, reduced to `[0, n)` by multiply-shift. Positions that coincide for
//! one key are treated as a set, so such a key touches fewer than `k` cells
//! and its hypergraph edge has order below `k`.

use std::hash::Hasher;

use serde::{Deserialize, Serialize};
use siphasher::sip::SipHasher13;

use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::process::Strategy;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingSketch<C: Counter> {
    width: usize,
    depth: usize,
    hash_seed: u64,
    strategy: Strategy,
    counters: Vec<C>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    n: usize,
    k: usize,
    hash_seed: u64,
    strategy: Strategy,
}

impl<C: Counter> CountingSketch<C> {
    pub fn new(width: usize, depth: usize, hash_seed: u64, strategy: Strategy) -> Result<Self> {
        if width == 0 || depth == 0 {
            return Err(Error::invalid(format!(
                "sketch needs width and depth >= 1, got {width} x {depth}"
            )));
        }
        Ok(CountingSketch {
            width,
            depth,
            hash_seed,
            strategy,
            counters: vec![C::zero(); width],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn hash_seed(&self) -> u64 {
        self.hash_seed
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn counters(&self) -> &[C] {
        &self.counters
    }

    /// Distinct cell positions of `key`, sorted.
    pub fn positions(&self, key: &[u8]) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.depth as u64)
            .map(|i| {
                let mut h = SipHasher13::new_with_keys(self.hash_seed, i);
                h.write(key);
                ((h.finish() as u128 * self.width as u128) >> 64) as usize
            })
            .collect();
        pos.sort_unstable();
        pos.dedup();
        pos
    }

    pub fn update(&mut self, key: impl AsRef<[u8]>) {
        let pos = self.positions(key.as_ref());
        match self.strategy {
            Strategy::Cm => {
                for p in pos {
                    self.counters[p] = self.counters[p].bump();
                }
            }
            Strategy::Cu => {
                let min = self.min_at(&pos);
                let bumped = min.bump();
                for p in pos {
                    if self.counters[p] == min {
                        self.counters[p] = bumped;
                    }
                }
            }
        }
    }

    pub fn query(&self, key: impl AsRef<[u8]>) -> u64 {
        self.min_at(&self.positions(key.as_ref())).to_u64()
    }

    fn min_at(&self, pos: &[usize]) -> C {
        pos.iter()
            .map(|&p| self.counters[p])
            .min()
            .expect("depth >= 1")
    }

    /// Hash hypergraph of `keys`: edge `i` is the position set of `keys[i]`.
    pub fn hash_hypergraph<K: AsRef<[u8]>>(&self, keys: &[K]) -> Result<HashHypergraph> {
        let mut short_edges = Vec::new();
        let edges: Vec<Vec<usize>> = keys
            .iter()
            .enumerate()
            .map(|(i, key)| {
                let pos = self.positions(key.as_ref());
                if pos.len() < self.depth {
                    short_edges.push(i);
                }
                pos
            })
            .collect();
        Ok(HashHypergraph {
            graph: Hypergraph::from_edges(self.width, self.depth, edges)?,
            short_edges,
        })
    }

    /// JSON header line `{n,k,hash_seed,strategy}` followed by the counters
    /// as little-endian integers of the counter width.
    pub fn export(&self) -> Vec<u8> {
        let header = Header {
            n: self.width,
            k: self.depth,
            hash_seed: self.hash_seed,
            strategy: self.strategy,
        };
        let mut out = serde_json::to_vec(&header).expect("header serializes");
        out.push(b'\n');
        out.reserve(self.width * C::BYTES);
        for &c in &self.counters {
            c.write_le(&mut out);
        }
        out
    }

    pub fn import(bytes: &[u8]) -> Result<Self> {
        let split = bytes.iter().position(|&b| b == b'\n').ok_or(Error::Parse {
            line: 1,
            msg: "missing header line".into(),
        })?;
        let header: Header = serde_json::from_slice(&bytes[..split])?;
        let body = &bytes[split + 1..];
        if body.len() != header.n * C::BYTES {
            return Err(Error::Parse {
                line: 2,
                msg: format!(
                    "expected {} counter bytes for n = {}, found {}",
                    header.n * C::BYTES,
                    header.n,
                    body.len()
                ),
            });
        }
        let mut sketch = Self::new(header.n, header.k, header.hash_seed, header.strategy)?;
        for (slot, chunk) in sketch.counters.iter_mut().zip(body.chunks_exact(C::BYTES)) {
            *slot = C::read_le(chunk);
        }
        Ok(sketch)
    }
}

#[derive(Debug, Clone)]
pub struct HashHypergraph {
    pub graph: Hypergraph,
    /// Keys whose hash positions collided (edge order below `k`).
    pub short_edges: Vec<usize>,
}

/// `(n, k)` with `k = ⌈ln(1/δ)⌉` and `n = ⌈k·e/ε⌉`.
pub fn guarantee_dims(epsilon: f64, delta: f64) -> Result<(usize, usize)> {
    if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "epsilon and delta must lie in (0, 1), got {epsilon}, {delta}"
        )));
    }
    let depth = (1.0 / delta).ln().ceil().max(1.0) as usize;
    let width = (depth as f64 * std::f64::consts::E / epsilon).ceil() as usize;
    Ok((width, depth))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub width: usize,
    pub depth: usize,
    pub failures: u64,
    pub checks: u64,
    pub failure_rate: f64,
}

/// Over `trials` independent hash seeds, inserts `stream` into a CM sketch
/// sized by [`guarantee_dims`] and counts the (trial, query key) pairs whose
/// overestimate exceeds `ε·N`, `N` being the stream length.
pub fn guarantee_trial(
    epsilon: f64,
    delta: f64,
    stream: &[u64],
    query_keys: &[u64],
    trials: u64,
    seed: u64,
) -> Result<TrialOutcome> {
    let (width, depth) = guarantee_dims(epsilon, delta)?;
    let bound = epsilon * stream.len() as f64;
    let truth = |key: u64| stream.iter().filter(|&&k| k == key).count() as u64;
    let true_counts: Vec<u64> = query_keys.iter().map(|&k| truth(k)).collect();

    let mut failures = 0;
    for trial in 0..trials {
        let hash_seed = seed::derive(seed, "guarantee-hash", &[trial]);
        let mut sketch = CountingSketch::<u64>::new(width, depth, hash_seed, Strategy::Cm)?;
        for key in stream {
            sketch.update(key.to_le_bytes());
        }
        for (key, &count) in query_keys.iter().zip(&true_counts) {
            if (sketch.query(key.to_le_bytes()) - count) as f64 > bound {
                failures += 1;
            }
        }
    }
    let checks = trials * query_keys.len() as u64;
    Ok(TrialOutcome {
        width,
        depth,
        failures,
        checks,
        failure_rate: if checks == 0 {
            0.0
        } else {
            failures as f64 / checks as f64
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CountingSketch64;

    #[test]
    fn rejects_zero_dimensions() {
        assert!(CountingSketch64::new(0, 3, 1, Strategy::Cu).is_err());
        assert!(CountingSketch64::new(3, 0, 1, Strategy::Cu).is_err());
    }

    #[test]
    fn single_cell_collides_everything() {
        for strategy in Strategy::BOTH {
            let mut s = CountingSketch64::new(1, 1, 9, strategy).unwrap();
            for key in ["a", "b", "c", "d", "e"] {
                s.update(key);
            }
            assert_eq!(s.query("zzz"), 5);
        }
    }

    #[test]
    fn fresh_key_counts_exactly() {
        for strategy in Strategy::BOTH {
            let mut s = CountingSketch64::new(1000, 3, 4, strategy).unwrap();
            for _ in 0..3 {
                s.update(b"p");
            }
            assert_eq!(s.query(b"p"), 3);
        }
    }

    #[test]
    fn positions_are_deterministic() {
        let a = CountingSketch64::new(97, 4, 11, Strategy::Cm).unwrap();
        let b = CountingSketch64::new(97, 4, 11, Strategy::Cu).unwrap();
        for i in 0u32..200 {
            let key = i.to_le_bytes();
            let pos = a.positions(&key);
            assert_eq!(pos, b.positions(&key));
            assert!(pos.iter().all(|&p| p < 97) && !pos.is_empty() && pos.len() <= 4);
        }
    }

    #[test]
    fn sizing_helper() {
        assert_eq!(guarantee_dims(0.1, 0.05).unwrap(), (82, 3));
        assert!(guarantee_dims(0.0, 0.05).is_err());
        assert!(guarantee_dims(0.1, 1.0).is_err());
    }

    #[test]
    fn empty_stream_never_fails() {
        let out = guarantee_trial(0.1, 0.05, &[], &[1, 2, 3], 10, 0).unwrap();
        assert_eq!((out.failures, out.checks, out.failure_rate), (0, 30, 0.0));
    }

    #[test]
    fn export_import_roundtrip() {
        let mut s = CountingSketch::<u32>::new(16, 3, 77, Strategy::Cu).unwrap();
        for i in 0u64..40 {
            s.update(i.to_le_bytes());
        }
        let bytes = s.export();
        assert!(bytes.starts_with(br#"{"n":16,"k":3,"hash_seed":77,"strategy":"cu"}"#));
        assert_eq!(
            bytes.len(),
            bytes.iter().position(|&b| b == b'\n').unwrap() + 1 + 16 * 4
        );
        let back = CountingSketch::<u32>::import(&bytes).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.export(), bytes);
        assert!(CountingSketch::<u64>::import(&bytes).is_err());
    }

    #[test]
    fn hash_hypergraph_one_key() {
        let s = CountingSketch64::new(50, 3, 2, Strategy::Cu).unwrap();
        let hh = s.hash_hypergraph(&[b"only"]).unwrap();
        assert_eq!(hh.graph.m(), 1);
        assert_eq!(hh.graph.edge(0), s.positions(b"only").as_slice());
    }
}
