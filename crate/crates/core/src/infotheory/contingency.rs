use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::categorical::{Categorical, Labels};
use crate::error::{KendallError, Result};

const DENSE_LIMIT: u64 = 1 << 20;

/// Joint state counts of one or more categorical sequences.
///
/// Only positions where every constituent is present are counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    dims: Vec<u32>,
    /// Non-zero cells as (mixed-radix state index, count), sorted by index.
    cells: Vec<(u64, u64)>,
    total: u64,
}

impl ContingencyTable {
    pub fn new(xs: &[&dyn Categorical]) -> Result<Self> {
        let first = xs
            .first()
            .ok_or_else(|| KendallError::InvalidArgument("contingency table needs a sequence".into()))?;
        let len = first.len();
        for x in xs.iter().skip(1) {
            if x.len() != len {
                return Err(KendallError::length_mismatch_in(len, x.len(), "contingency table"));
            }
        }
        let dims: Vec<u32> = xs.iter().map(|x| x.levels().max(1)).collect();
        let size = dims
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(u64::from(d)))
            .ok_or(KendallError::StateSpaceOverflow(dims.len()))?;

        let mut index: Vec<u64> = vec![0; len];
        let mut buf = Vec::with_capacity(len);
        const GONE: u64 = u64::MAX;
        for (x, &d) in xs.iter().zip(&dims) {
            x.fill_codes(&mut buf);
            for (idx, &c) in index.iter_mut().zip(buf.iter()) {
                if c == Labels::MISSING {
                    *idx = GONE;
                } else if *idx != GONE {
                    *idx = *idx * u64::from(d) + u64::from(c);
                }
            }
        }

        let cells: Vec<(u64, u64)> = if size <= DENSE_LIMIT {
            let mut dense = vec![0u64; size as usize];
            for &i in index.iter().filter(|&&i| i != GONE) {
                dense[i as usize] += 1;
            }
            dense
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(|(i, c)| (i as u64, c))
                .collect()
        } else {
            let mut sparse: HashMap<u64, u64> = HashMap::new();
            for &i in index.iter().filter(|&&i| i != GONE) {
                *sparse.entry(i).or_default() += 1;
            }
            let mut v: Vec<(u64, u64)> = sparse.into_iter().collect();
            v.sort_unstable();
            v
        };
        let total = cells.iter().map(|c| c.1).sum();
        Ok(Self { dims, cells, total })
    }

    /// Number of jointly complete positions.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    fn decode(&self, mut index: u64) -> Vec<u32> {
        let mut state = vec![0u32; self.dims.len()];
        for (s, &d) in state.iter_mut().zip(&self.dims).rev() {
            *s = (index % u64::from(d)) as u32;
            index /= u64::from(d);
        }
        state
    }

    /// Count of one joint state.
    pub fn count(&self, state: &[u32]) -> u64 {
        if state.len() != self.dims.len() || state.iter().zip(&self.dims).any(|(s, d)| s >= d) {
            return 0;
        }
        let idx = state
            .iter()
            .zip(&self.dims)
            .fold(0u64, |acc, (&s, &d)| acc * u64::from(d) + u64::from(s));
        self.cells
            .binary_search_by_key(&idx, |c| c.0)
            .map(|i| self.cells[i].1)
            .unwrap_or(0)
    }

    /// Non-zero cells as (joint state, count).
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, u64)> + '_ {
        self.cells.iter().map(|&(i, c)| (self.decode(i), c))
    }

    /// Plug-in entropy of the full joint distribution, in nats.
    pub fn entropy(&self) -> f64 {
        entropy_from_counts(self.cells.iter().map(|c| c.1), self.total)
    }

    /// Plug-in entropy of the marginal over `axes`, in nats.
    pub fn marginal_entropy(&self, axes: &[usize]) -> f64 {
        assert!(axes.iter().all(|&a| a < self.dims.len()), "axis out of range");
        if axes.len() == self.dims.len() && axes.iter().enumerate().all(|(i, &a)| i == a) {
            return self.entropy();
        }
        let size: u64 = axes.iter().map(|&a| u64::from(self.dims[a])).product();
        let project = |index: u64| {
            let state = self.decode(index);
            axes.iter()
                .fold(0u64, |acc, &a| acc * u64::from(self.dims[a]) + u64::from(state[a]))
        };
        if size <= DENSE_LIMIT {
            let mut dense = vec![0u64; size as usize];
            for &(i, c) in &self.cells {
                dense[project(i) as usize] += c;
            }
            entropy_from_counts(dense.into_iter(), self.total)
        } else {
            let mut sparse: HashMap<u64, u64> = HashMap::new();
            for &(i, c) in &self.cells {
                *sparse.entry(project(i)).or_default() += c;
            }
            entropy_from_counts(sparse.into_values(), self.total)
        }
    }
}

/// `sum(c ln(N/c)) / N` over occupied states, in nats.
pub(crate) fn entropy_from_counts(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    // sum of c ln(N/c): one occupied state gives exactly 0, two equal ones exactly ln 2
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let c = c as f64;
            c * (t / c).ln()
        })
        .sum::<f64>()
        / t
}

/// Unit of reported information. Estimators compute in nats.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            LogBase::E => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }
}

impl FromStr for LogBase {
    type Err = KendallError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "nat" | "nats" => Ok(LogBase::E),
            "2" | "bit" | "bits" => Ok(LogBase::Two),
            other => Err(KendallError::InvalidArgument(format!(
                "unknown log base '{other}', expected 'e' or '2'"
            ))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::E => "e",
            LogBase::Two => "2",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(codes: &[Option<u32>], levels: u32) -> Labels {
        Labels::new(codes.to_vec(), levels).unwrap()
    }

    #[test]
    fn counts_exclude_missing_positions() {
        let x = labels(&[Some(0), Some(1), None, Some(1)], 2);
        let y = labels(&[Some(2), Some(0), Some(1), None], 3);
        let t = ContingencyTable::new(&[&x, &y]).unwrap();
        assert_eq!(t.total(), 2);
        assert_eq!(t.count(&[0, 2]), 1);
        assert_eq!(t.count(&[1, 0]), 1);
        assert_eq!(t.count(&[1, 1]), 0);
        assert_eq!(t.count(&[5, 0]), 0);
        let cells: Vec<_> = t.iter().collect();
        assert_eq!(cells, vec![(vec![0, 2], 1), (vec![1, 0], 1)]);
        assert_eq!(t.total(), cells.iter().map(|c| c.1).sum::<u64>());
    }

    #[test]
    fn marginals() {
        let x = labels(&[Some(0), Some(0), Some(1), Some(1)], 2);
        let y = labels(&[Some(0), Some(1), Some(0), Some(1)], 2);
        let t = ContingencyTable::new(&[&x, &y]).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((t.marginal_entropy(&[0]) - ln2).abs() < 1e-15);
        assert!((t.marginal_entropy(&[1]) - ln2).abs() < 1e-15);
        assert!((t.entropy() - 2.0 * ln2).abs() < 1e-15);
        assert!((t.marginal_entropy(&[1, 0]) - 2.0 * ln2).abs() < 1e-15);
    }

    #[test]
    fn sparse_path_matches_dense() {
        let n = 500;
        let big = Labels::from_raw((0..n).map(|i| (i * 7919) % 3000).collect(), 3000);
        let small = Labels::from_raw((0..n).map(|i| i % 3).collect(), 3);
        let sparse = ContingencyTable::new(&[&big, &small]).unwrap();
        const { assert!(3000 * 3 < DENSE_LIMIT) };
        let huge = Labels::from_raw((0..n).map(|i| (i * 7919) % 3000).collect(), 2_000_000);
        let t2 = ContingencyTable::new(&[&huge, &small]).unwrap();
        assert!((sparse.entropy() - t2.entropy()).abs() < 1e-12);
        assert!((sparse.marginal_entropy(&[0]) - t2.marginal_entropy(&[0])).abs() < 1e-12);
    }

    #[test]
    fn log_base() {
        assert_eq!("2".parse::<LogBase>().unwrap(), LogBase::Two);
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::E);
        assert!("10".parse::<LogBase>().is_err());
        assert!((LogBase::Two.convert(std::f64::consts::LN_2) - 1.0).abs() < 1e-15);
    }
}
