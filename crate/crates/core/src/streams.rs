//! Key streams over `m` distinct keys (edge indices `0..m`).
//!
//! Uniform and Zipf streams are produced lazily by [`StreamSpec::keys`], so
//! runs of length `N·m` in the hundreds of millions never materialize the
//! sequence. The eager functions return exactly what the lazy iterator
//! yields for the same seed.

use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StreamModel {
    /// Random permutation of `N` copies of every key.
    Balanced,
    /// `N·m` i.i.d. uniform draws.
    Uniform,
    /// `N·m` i.i.d. draws with `P(rank i) ∝ 1/i^beta`; key id = rank − 1.
    Zipf { beta: f64 },
    /// Caller-supplied sequence; the multiplicity parameter is ignored.
    Explicit(Vec<u32>),
}

impl fmt::Display for StreamModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamModel::Balanced => f.write_str("balanced"),
            StreamModel::Uniform => f.write_str("uniform"),
            StreamModel::Zipf { beta } => write!(f, "zipf:{beta}"),
            StreamModel::Explicit(_) => f.write_str("explicit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub model: StreamModel,
    /// Per-key multiplicity parameter `N`.
    pub multiplicity: u64,
    pub seed: u64,
}

impl StreamSpec {
    pub fn new(model: StreamModel, multiplicity: u64, seed: u64) -> Self {
        StreamSpec {
            model,
            multiplicity,
            seed,
        }
    }

    /// Number of keys the stream yields for `m` distinct keys.
    pub fn len(&self, m: usize) -> u64 {
        match &self.model {
            StreamModel::Explicit(seq) => seq.len() as u64,
            _ => self.multiplicity * m as u64,
        }
    }

    pub fn is_empty(&self, m: usize) -> bool {
        self.len(m) == 0
    }

    pub fn keys(&self, m: usize) -> Result<KeyStream> {
        if m == 0 {
            return Err(Error::invalid("stream needs at least one key"));
        }
        let len = self.len(m);
        let inner = match &self.model {
            StreamModel::Balanced => {
                Inner::Owned(n_balanced(m, self.multiplicity, self.seed)?.into_iter())
            }
            StreamModel::Explicit(seq) => {
                if let Some(&bad) = seq.iter().find(|&&key| key as usize >= m) {
                    return Err(Error::EdgeOutOfRange {
                        index: bad as usize,
                        m,
                    });
                }
                Inner::Owned(seq.clone().into_iter())
            }
            StreamModel::Zipf { beta } if *beta == 0.0 => Inner::Uniform {
                rng: seed::rng(self.seed),
                m: m as u32,
            },
            StreamModel::Uniform => Inner::Uniform {
                rng: seed::rng(self.seed),
                m: m as u32,
            },
            StreamModel::Zipf { beta } => Inner::Zipf {
                rng: seed::rng(self.seed),
                cdf: zipf_cdf(m, *beta)?,
            },
        };
        Ok(KeyStream {
            inner,
            remaining: len,
        })
    }
}

pub struct KeyStream {
    inner: Inner,
    remaining: u64,
}

enum Inner {
    Owned(std::vec::IntoIter<u32>),
    Uniform { rng: Rng, m: u32 },
    Zipf { rng: Rng, cdf: Vec<f64> },
}

impl Iterator for KeyStream {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        match &mut self.inner {
            Inner::Owned(it) => it.next(),
            Inner::Uniform { rng, m } => Some(rng.gen_range(0..*m)),
            Inner::Zipf { rng, cdf } => {
                let u: f64 = rng.gen();
                Some(cdf.partition_point(|&c| c <= u) as u32)
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for KeyStream {}

fn check_keys(m: usize) -> Result<()> {
    if m == 0 || m > u32::MAX as usize {
        return Err(Error::invalid(format!("key count m = {m} out of range")));
    }
    Ok(())
}

/// Fisher–Yates permutation of `N` copies of each key in `[0, m)`.
pub fn n_balanced(m: usize, multiplicity: u64, seed: u64) -> Result<Vec<u32>> {
    check_keys(m)?;
    let mut keys: Vec<u32> = (0..m as u32)
        .flat_map(|key| std::iter::repeat_n(key, multiplicity as usize))
        .collect();
    keys.shuffle(&mut seed::rng(seed));
    Ok(keys)
}

pub fn n_uniform(m: usize, multiplicity: u64, seed: u64) -> Result<Vec<u32>> {
    check_keys(m)?;
    Ok(StreamSpec::new(StreamModel::Uniform, multiplicity, seed)
        .keys(m)?
        .collect())
}

pub fn zipf_stream(m: usize, multiplicity: u64, beta: f64, seed: u64) -> Result<Vec<u32>> {
    check_keys(m)?;
    Ok(
        StreamSpec::new(StreamModel::Zipf { beta }, multiplicity, seed)
            .keys(m)?
            .collect(),
    )
}

/// `p_i = i^-beta / Σ_j j^-beta` for ranks `i = 1..=m`.
pub fn zipf_probs(m: usize, beta: f64) -> Result<Vec<f64>> {
    check_keys(m)?;
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::invalid(format!(
            "Zipf skewness must be finite and >= 0, got {beta}"
        )));
    }
    let weights: Vec<f64> = (1..=m).map(|i| (i as f64).powf(-beta)).collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

fn zipf_cdf(m: usize, beta: f64) -> Result<Vec<f64>> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = zipf_probs(m, beta)?
        .into_iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    // u < 1 always lands inside the table
    *cdf.last_mut().unwrap() = 1.0;
    Ok(cdf)
}

/// Writes one key per line.
pub fn write_keys<W: Write>(mut out: W, keys: impl IntoIterator<Item = u32>) -> Result<()> {
    for key in keys {
        writeln!(out, "{key}")?;
    }
    Ok(())
}

/// Reads newline-delimited keys; blank lines and `#` comments are skipped.
pub fn read_keys<R: BufRead>(input: R) -> Result<Vec<u32>> {
    let mut keys = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let tok = line.split('#').next().unwrap_or("").trim();
        if tok.is_empty() {
            continue;
        }
        keys.push(tok.parse().map_err(|e| Error::Parse {
            line: i + 1,
            msg: format!("`{tok}`: {e}"),
        })?);
    }
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(keys: &[u32], m: usize) -> Vec<u64> {
        let mut c = vec![0; m];
        for &k in keys {
            c[k as usize] += 1;
        }
        c
    }

    #[test]
    fn balanced_cases() {
        assert_eq!(n_balanced(1, 4, 9).unwrap(), vec![0, 0, 0, 0]);
        let s = n_balanced(3, 2, 9).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(counts(&s, 3), vec![2, 2, 2]);
        let s = n_balanced(5, 100, 1).unwrap();
        assert!(counts(&s, 5).iter().all(|&c| c == 100));
        assert_ne!(s, n_balanced(5, 100, 2).unwrap());
    }

    #[test]
    fn uniform_cases() {
        assert_eq!(n_uniform(1, 7, 3).unwrap(), vec![0; 7]);
        let s = n_uniform(2, 1, 3).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|&k| k < 2));
        assert_eq!(n_uniform(100, 10, 5).unwrap().len(), 1000);
    }

    #[test]
    fn zipf_probability_vectors() {
        let p = zipf_probs(5, 0.0).unwrap();
        assert!(p.iter().all(|&x| (x - 0.2).abs() < 1e-15));
        let p = zipf_probs(2, 1.0).unwrap();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15 && (p[1] - 1.0 / 3.0).abs() < 1e-15);
        // direct summation: 1, 1/√2, 1/√3, 1/2 over their sum 2.784457...
        let p = zipf_probs(4, 0.5).unwrap();
        for (got, want) in p.iter().zip([0.3591, 0.2539, 0.2073, 0.1796]) {
            assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        }
        assert!(zipf_probs(3, -1.0).is_err());
        assert!(zipf_probs(3, f64::NAN).is_err());
    }

    #[test]
    fn zipf_beta_zero_is_uniform_path() {
        assert_eq!(
            zipf_stream(50, 20, 0.0, 8).unwrap(),
            n_uniform(50, 20, 8).unwrap()
        );
        assert_eq!(zipf_stream(1, 5, 1.3, 8).unwrap(), vec![0; 5]);
    }

    #[test]
    fn zipf_two_keys_frequency() {
        let s = zipf_stream(2, 50_000, 1.0, 4).unwrap();
        let f = counts(&s, 2)[0] as f64 / s.len() as f64;
        assert!((f - 2.0 / 3.0).abs() < 0.01, "{f}");
    }

    #[test]
    fn explicit_validates_range() {
        let spec = StreamSpec::new(StreamModel::Explicit(vec![0, 2]), 1, 0);
        assert!(spec.keys(2).is_err());
        assert_eq!(spec.keys(3).unwrap().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(spec.len(3), 2);
    }

    #[test]
    fn key_file_roundtrip() {
        let mut buf = Vec::new();
        write_keys(&mut buf, [3, 0, 7]).unwrap();
        assert_eq!(buf, b"3\n0\n7\n");
        assert_eq!(read_keys(&b"3\n# c\n\n0\n7\n"[..]).unwrap(), vec![3, 0, 7]);
        assert!(read_keys(&b"x\n"[..]).is_err());
    }

    #[test]
    fn model_labels() {
        assert_eq!(StreamModel::Zipf { beta: 0.5 }.to_string(), "zipf:0.5");
        assert_eq!(StreamModel::Balanced.to_string(), "balanced");
    }
}
