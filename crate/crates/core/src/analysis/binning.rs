//! Discretisation baselines.
//!
//! Equal-width bins are left-closed with the last bin also right-closed.
//! Equal-frequency edges sit at the `i/k` type-7 quantiles and a value equal
//! to an edge goes to the lower bin.

use crate::categorical::Labels;
use crate::error::{KendallError, Result};
use crate::transform::OrdinalVector;

use super::stats::quantile_sorted;

fn check_k(k: usize) -> Result<u32> {
    if k < 2 {
        return Err(KendallError::InvalidArgument(format!("need at least 2 bins, got {k}")));
    }
    u32::try_from(k).map_err(|_| KendallError::InvalidArgument(format!("too many bins: {k}")))
}

fn present_range(x: &OrdinalVector) -> Result<(f64, f64)> {
    let mut it = x.values.iter().flatten();
    let first = *it.next().ok_or(KendallError::NoCompletePositions)?;
    let (lo, hi) = it.fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if lo == hi {
        return Err(KendallError::Degenerate(format!("feature '{}' is constant", x.name)));
    }
    Ok((lo, hi))
}

pub fn bin_equal_width(x: &OrdinalVector, k: usize) -> Result<Labels> {
    let levels = check_k(k)?;
    let (lo, hi) = present_range(x)?;
    let span = hi - lo;
    let codes = x
        .values
        .iter()
        .map(|v| {
            v.map(|v| {
                let pos = ((v - lo) / span * k as f64).floor();
                (pos.max(0.0) as u32).min(levels - 1)
            })
        })
        .collect();
    Labels::new(codes, levels)
}

pub fn bin_equal_frequency(x: &OrdinalVector, k: usize) -> Result<Labels> {
    let levels = check_k(k)?;
    present_range(x)?;
    let mut sorted: Vec<f64> = x.values.iter().flatten().copied().collect();
    sorted.sort_by(f64::total_cmp);
    let edges: Vec<f64> = (1..k).map(|i| quantile_sorted(&sorted, i as f64 / k as f64)).collect();
    let codes = x
        .values
        .iter()
        .map(|v| v.map(|v| edges.partition_point(|&e| e < v) as u32))
        .collect();
    Labels::new(codes, levels)
}
