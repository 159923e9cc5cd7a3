//! Merging independently transformed batches.
//!
//! Each batch keeps its within-batch relations; pairs spanning two batches
//! were never observed on a common scale and are marked missing. Batch order
//! defines object order in the merged system.

use crate::error::{KendallError, Result};
use crate::transform::{KendallSequence, PairScheme, Symbol, TransformedSystem};

/// Placement of batches in the merged object index space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchMap {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    total: usize,
}

impl BatchMap {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(KendallError::InvalidArgument("no batches to merge".into()));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0usize;
        for &s in &sizes {
            offsets.push(total);
            total += s;
        }
        Ok(Self { offsets, sizes, total })
    }

    pub fn from_sequences(batches: &[KendallSequence]) -> Result<Self> {
        Self::new(batches.iter().map(KendallSequence::n).collect())
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Total number of objects, `N`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Batch holding merged object `i`.
    pub fn batch_of(&self, i: usize) -> Option<usize> {
        (i < self.total).then(|| self.offsets.partition_point(|&o| o <= i) - 1)
    }
}

/// Merges one feature's batch transforms into a sequence over `N(N-1)` pairs.
pub fn merge_transformed(batches: &[KendallSequence], map: &BatchMap) -> Result<KendallSequence> {
    if batches.len() != map.sizes.len() {
        return Err(KendallError::length_mismatch_in(map.sizes.len(), batches.len(), "batch list"));
    }
    for (k, (b, &size)) in batches.iter().zip(&map.sizes).enumerate() {
        if b.n() != size {
            return Err(KendallError::length_mismatch_in(size, b.n(), format!("batch {k}")));
        }
    }
    let merged = PairScheme::new(map.total)?;
    let mut out = KendallSequence::filled(map.total, Symbol::Missing)?;
    for (batch, &offset) in batches.iter().zip(&map.offsets) {
        let row = batch.n() - 1;
        for (idx, s) in batch.iter().enumerate() {
            let a = idx / row;
            let r = idx % row;
            let b = if r < a { r } else { r + 1 };
            let target = merged.pair_index(offset + a, offset + b)?;
            out.set(target, s);
        }
    }
    Ok(out)
}

/// Merges whole transformed systems that share the same feature names.
pub fn merge_systems(systems: &[TransformedSystem]) -> Result<TransformedSystem> {
    let first = systems
        .first()
        .ok_or_else(|| KendallError::InvalidArgument("no systems to merge".into()))?;
    for (k, s) in systems.iter().enumerate().skip(1) {
        if s.names() != first.names() {
            return Err(KendallError::InvalidArgument(format!(
                "batch {k} has features [{}], expected [{}]",
                s.names().join(", "),
                first.names().join(", ")
            )));
        }
    }
    let map = BatchMap::new(systems.iter().map(TransformedSystem::n).collect())?;
    let columns = (0..first.names().len())
        .map(|c| {
            let parts: Vec<KendallSequence> = systems.iter().map(|s| s.columns()[c].clone()).collect();
            merge_transformed(&parts, &map)
        })
        .collect::<Result<Vec<_>>>()?;
    TransformedSystem::new(map.total, first.names().to_vec(), columns)
}

/// Fraction of non-missing symbols; 0 for an empty sequence.
pub fn complete_fraction(x: &KendallSequence) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let missing = x.symbol_counts()[Symbol::Missing as usize];
    (x.len() - missing) as f64 / x.len() as f64
}
