//! Forward transformation of ordinal features into pair-relation sequences,
//! the Copeland inverse, and input preparation (tie jitter, one-vs-rest).

mod inverse;
mod pairs;
mod sequence;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use inverse::{copeland_inverse, weighted_copeland, PairVote, PairVotes, Ranking};
pub use pairs::{pair_at, pair_count, pair_index, PairScheme, SCHEME_ID};
pub use sequence::{
    kendall_transform, kendall_transform_with, KendallSequence, OrdinalVector, Symbol,
    TransformOptions,
};

use crate::error::{KendallError, Result};

/// A system of transformed features sharing one pair scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedSystem {
    n: usize,
    names: Vec<String>,
    columns: Vec<KendallSequence>,
}

impl TransformedSystem {
    pub fn new(n: usize, names: Vec<String>, columns: Vec<KendallSequence>) -> Result<Self> {
        PairScheme::new(n)?;
        if names.len() != columns.len() {
            return Err(KendallError::length_mismatch_in(names.len(), columns.len(), "column names"));
        }
        for c in &columns {
            if c.n() != n {
                return Err(KendallError::length_mismatch_in(n, c.n(), "transformed system"));
            }
        }
        Ok(Self { n, names, columns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.n * (self.n - 1)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[KendallSequence] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&KendallSequence> {
        self.names.iter().position(|n| n == name).map(|i| &self.columns[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &KendallSequence)> {
        self.names.iter().map(String::as_str).zip(self.columns.iter())
    }

    pub fn into_parts(self) -> (usize, Vec<String>, Vec<KendallSequence>) {
        (self.n, self.names, self.columns)
    }
}

/// Transforms every column of an information system under one pair scheme.
pub fn transform_system(table: &[OrdinalVector]) -> Result<TransformedSystem> {
    transform_system_with(table, TransformOptions::default())
}

pub fn transform_system_with(table: &[OrdinalVector], opts: TransformOptions) -> Result<TransformedSystem> {
    let first = table
        .first()
        .ok_or_else(|| KendallError::InvalidArgument("system has no columns".into()))?;
    let n = first.len();
    for col in table {
        if col.len() != n {
            return Err(KendallError::length_mismatch_in(n, col.len(), format!("column '{}'", col.name)));
        }
    }
    let columns = table
        .par_iter()
        .map(|c| kendall_transform_with(c, opts))
        .collect::<Result<Vec<_>>>()?;
    TransformedSystem::new(n, table.iter().map(|c| c.name.clone()).collect(), columns)
}

/// One-vs-rest 0/1 indicators of a categorical feature, named by category.
///
/// Categories are emitted in order of first appearance. A two-category feature
/// yields a single indicator for its first category. Missing entries stay
/// missing in every indicator.
pub fn expand_categorical<S: AsRef<str>>(x: &[Option<S>]) -> Result<Vec<OrdinalVector>> {
    let mut categories: Vec<&str> = Vec::new();
    let mut seen = HashSet::new();
    for v in x.iter().flatten() {
        if seen.insert(v.as_ref()) {
            categories.push(v.as_ref());
        }
    }
    if categories.len() < 2 {
        return Err(KendallError::Degenerate(format!(
            "categorical feature has {} distinct categories, need at least 2",
            categories.len()
        )));
    }
    if categories.len() == 2 {
        categories.truncate(1);
    }
    Ok(categories
        .into_iter()
        .map(|cat| {
            let values = x
                .iter()
                .map(|v| v.as_ref().map(|v| if v.as_ref() == cat { 1.0 } else { 0.0 }))
                .collect();
            OrdinalVector::with_missing(cat, values)
        })
        .collect())
}

const JITTER_MAX_ROUNDS: usize = 1000;

/// Breaks ties with seeded uniform noise in `(-scale/2, scale/2)`.
///
/// Only values that occur more than once are perturbed; colliding draws are
/// redrawn until all present values are distinct.
pub fn jitter_ties(x: &OrdinalVector, seed: u64, scale: f64) -> Result<OrdinalVector> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(KendallError::InvalidArgument(format!(
            "jitter scale must be positive and finite, got {scale}"
        )));
    }
    let original: Vec<(usize, f64)> = x
        .values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    let mut pending = duplicated(&original);
    if pending.is_empty() {
        return Ok(x.clone());
    }
    let jittered: HashSet<usize> = pending.iter().copied().collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = x.clone();
    let half = scale / 2.0;
    for _ in 0..JITTER_MAX_ROUNDS {
        for &i in &pending {
            let base = x.values[i].expect("tied values are present");
            let noise = loop {
                let u: f64 = rng.random_range(-half..half);
                if u != -half {
                    break u;
                }
            };
            out.values[i] = Some(base + noise);
        }
        let current: Vec<(usize, f64)> = out
            .values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect();
        let dups = duplicated(&current);
        if dups.is_empty() {
            return Ok(out);
        }
        // redraw only entries that were jittered in the first place
        pending = dups.into_iter().filter(|i| jittered.contains(i)).collect();
        if pending.is_empty() {
            break;
        }
    }
    Err(KendallError::InvalidArgument(format!(
        "jitter scale {scale} too small to separate ties in '{}'",
        x.name
    )))
}

/// Indices whose value occurs more than once, in ascending index order.
fn duplicated(values: &[(usize, f64)]) -> Vec<usize> {
    let mut sorted: Vec<(usize, f64)> = values.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut out = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end].1 == sorted[start].1 {
            end += 1;
        }
        if end - start > 1 {
            out.extend(sorted[start..end].iter().map(|p| p.0));
        }
        start = end;
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_shape_and_order() {
        let table = vec![
            OrdinalVector::new("b", [1.0, 2.0, 3.0, 4.0]),
            OrdinalVector::new("a", [4.0, 4.0, 4.0, 4.0]),
            OrdinalVector::new("c", [0.5, -1.0, 2.0, 0.0]),
        ];
        let sys = transform_system(&table).unwrap();
        assert_eq!(sys.n(), 4);
        assert_eq!(sys.names(), &["b", "a", "c"]);
        assert!(sys.columns().iter().all(|c| c.len() == 12));
        assert_eq!(sys.column("a").unwrap().symbol_counts(), [0, 0, 12, 0]);
    }

    #[test]
    fn system_rejects_ragged() {
        let table = vec![OrdinalVector::new("a", [1.0, 2.0]), OrdinalVector::new("b", [1.0])];
        let err = transform_system(&table).unwrap_err();
        assert!(err.to_string().contains("'b'"), "{err}");
    }

    #[test]
    fn expand_three_categories() {
        let x = ["red", "blue", "red", "green"].map(Some);
        let ind = expand_categorical(&x).unwrap();
        let got: Vec<(&str, Vec<Option<f64>>)> =
            ind.iter().map(|v| (v.name.as_str(), v.values.clone())).collect();
        let one = |v: [f64; 4]| v.map(Some).to_vec();
        assert_eq!(
            got,
            vec![
                ("red", one([1.0, 0.0, 1.0, 0.0])),
                ("blue", one([0.0, 1.0, 0.0, 0.0])),
                ("green", one([0.0, 0.0, 0.0, 1.0])),
            ]
        );
        for v in &ind {
            let k = kendall_transform(v).unwrap();
            assert_eq!(k.symbol_counts()[Symbol::Missing as usize], 0);
        }
        // within-class pairs of the red indicator are ties
        let red = kendall_transform(&ind[0]).unwrap();
        assert_eq!(red.relation(0, 2).unwrap(), Symbol::Tie);
        assert_eq!(red.relation(1, 3).unwrap(), Symbol::Tie);
        assert_eq!(red.relation(0, 1).unwrap(), Symbol::Desc);
    }

    #[test]
    fn expand_binary_and_constant() {
        let ind = expand_categorical(&["yes", "no", "yes"].map(Some)).unwrap();
        assert_eq!(ind.len(), 1);
        assert_eq!(ind[0].values, vec![Some(1.0), Some(0.0), Some(1.0)]);
        assert!(matches!(
            expand_categorical(&["a", "a"].map(Some)),
            Err(KendallError::Degenerate(_))
        ));
    }

    #[test]
    fn jitter_is_noop_without_ties() {
        let x = OrdinalVector::new("x", [3.0, 1.0, 2.0]);
        assert_eq!(jitter_ties(&x, 7, 0.5).unwrap(), x);
    }

    #[test]
    fn jitter_breaks_ties_and_keeps_order() {
        let x = OrdinalVector::new("x", [1.0, 1.0, 2.0]);
        for seed in 0..50 {
            let j = jitter_ties(&x, seed, 0.5).unwrap();
            let v: Vec<f64> = j.values.iter().map(|v| v.unwrap()).collect();
            assert_ne!(v[0], v[1]);
            assert_eq!(v[2], 2.0);
            assert!(v[0] < 2.0 && v[1] < 2.0);
            assert!((v[0] - 1.0).abs() < 0.25 && (v[1] - 1.0).abs() < 0.25);
            assert_eq!(jitter_ties(&x, seed, 0.5).unwrap(), j);
        }
    }

    #[test]
    fn jitter_leaves_missing_alone() {
        let x = OrdinalVector::with_missing("x", vec![Some(1.0), None, Some(1.0), None]);
        let j = jitter_ties(&x, 1, 0.1).unwrap();
        assert_eq!(j.values[1], None);
        assert_eq!(j.values[3], None);
        assert_ne!(j.values[0], j.values[2]);
    }

    #[test]
    fn jitter_rejects_bad_scale() {
        let x = OrdinalVector::new("x", [1.0, 1.0]);
        assert!(jitter_ties(&x, 1, 0.0).is_err());
        assert!(jitter_ties(&x, 1, f64::NAN).is_err());
    }
}
