//! Kendall's tau over ordered pairs, normalised by `m = n(n-1)`.
//!
//! Two counters: a direct pair scan and a merge-sort counter (Knight's
//! algorithm). Pairs tied in either variable, or with a missing value, count
//! as neither concordant nor discordant but stay in `m`.

use std::cmp::Ordering;

use crate::error::{KendallError, Result};
use crate::transform::{pair_count, OrdinalVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauValue {
    pub tau: f64,
    /// Concordant ordered pairs.
    pub concordant: u64,
    /// Discordant ordered pairs.
    pub discordant: u64,
    /// All ordered pairs, `n(n-1)`.
    pub m: u64,
}

impl TauValue {
    fn from_counts(concordant: u64, discordant: u64, m: u64) -> Self {
        let tau = (concordant as f64 - discordant as f64) / m as f64;
        Self {
            tau,
            concordant,
            discordant,
            m,
        }
    }
}

fn check(x: &OrdinalVector, y: &OrdinalVector) -> Result<u64> {
    if x.len() != y.len() {
        return Err(KendallError::length_mismatch_in(x.len(), y.len(), "kendall_tau"));
    }
    if x.len() < 2 {
        return Err(KendallError::TooFewObjects(x.len()));
    }
    Ok(pair_count(x.len())? as u64)
}

/// O(n^2) reference counter.
pub fn kendall_tau_naive(x: &OrdinalVector, y: &OrdinalVector) -> Result<TauValue> {
    let m = check(x, y)?;
    let n = x.len();
    let (mut c, mut d) = (0u64, 0u64);
    for a in 0..n {
        let (Some(xa), Some(ya)) = (x.values[a], y.values[a]) else {
            continue;
        };
        for b in (a + 1)..n {
            let (Some(xb), Some(yb)) = (x.values[b], y.values[b]) else {
                continue;
            };
            let sx = xa.partial_cmp(&xb);
            let sy = ya.partial_cmp(&yb);
            match (sx, sy) {
                (Some(Ordering::Equal), _) | (_, Some(Ordering::Equal)) | (None, _) | (_, None) => {}
                (Some(p), Some(q)) if p == q => c += 2,
                _ => d += 2,
            }
        }
    }
    Ok(TauValue::from_counts(c, d, m))
}

// -0.0 and 0.0 must compare equal under total_cmp
#[inline]
fn norm(v: f64) -> f64 {
    v + 0.0
}

/// O(n log n) counter.
pub fn kendall_tau(x: &OrdinalVector, y: &OrdinalVector) -> Result<TauValue> {
    let m = check(x, y)?;
    let mut pairs: Vec<(f64, f64)> = x
        .values
        .iter()
        .zip(&y.values)
        .filter_map(|(a, b)| Some((norm((*a)?), norm((*b)?))))
        .collect();
    let nc = pairs.len() as u64;
    pairs.sort_unstable_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));

    let tied_in = |same: &dyn Fn(usize) -> bool| -> u64 {
        let mut total = 0u64;
        let mut run = 1u64;
        for i in 1..pairs.len() {
            if same(i) {
                run += 1;
            } else {
                total += run * (run - 1) / 2;
                run = 1;
            }
        }
        total + run * (run - 1) / 2
    };
    let x_ties = tied_in(&|i| pairs[i].0 == pairs[i - 1].0);
    let xy_ties = tied_in(&|i| pairs[i].0 == pairs[i - 1].0 && pairs[i].1 == pairs[i - 1].1);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let swaps = merge_sort_count(&mut ys);

    let mut y_ties = 0u64;
    let mut run = 1u64;
    for i in 1..ys.len() {
        if ys[i] == ys[i - 1] {
            run += 1;
        } else {
            y_ties += run * (run - 1) / 2;
            run = 1;
        }
    }
    y_ties += run * (run - 1) / 2;

    let all = nc * nc.saturating_sub(1) / 2;
    let discordant = swaps;
    let concordant = all + xy_ties - x_ties - y_ties - discordant;
    Ok(TauValue::from_counts(2 * concordant, 2 * discordant, m))
}

/// Sorts ascending and returns the number of strict inversions.
fn merge_sort_count(v: &mut [f64]) -> u64 {
    let n = v.len();
    let mut buf = v.to_vec();
    let mut swaps = 0u64;
    let mut width = 1;
    let (mut src, mut dst): (&mut [f64], &mut [f64]) = (v, &mut buf);
    let mut in_src = true;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if src[j] < src[i] {
                    dst[k] = src[j];
                    swaps += (mid - i) as u64;
                    j += 1;
                } else {
                    dst[k] = src[i];
                    i += 1;
                }
                k += 1;
            }
            dst[k..k + (mid - i)].copy_from_slice(&src[i..mid]);
            k += mid - i;
            dst[k..k + (hi - j)].copy_from_slice(&src[j..hi]);
            lo = hi;
        }
        std::mem::swap(&mut src, &mut dst);
        in_src = !in_src;
        width *= 2;
    }
    if !in_src {
        dst.copy_from_slice(src);
    }
    swaps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(v: &[f64]) -> OrdinalVector {
        OrdinalVector::new("v", v.iter().copied())
    }

    #[test]
    fn perfect_agreement_and_reversal() {
        let x = ov(&[0.1, 5.0, 2.0, 3.0]);
        assert_eq!(kendall_tau(&x, &x).unwrap().tau, 1.0);
        let r = ov(&[-0.1, -5.0, -2.0, -3.0]);
        let t = kendall_tau(&x, &r).unwrap();
        assert_eq!(t.tau, -1.0);
        assert_eq!((t.concordant, t.discordant, t.m), (0, 12, 12));
    }

    #[test]
    fn hand_enumerated() {
        let t = kendall_tau(&ov(&[1.0, 2.0, 3.0, 4.0]), &ov(&[1.0, 3.0, 2.0, 4.0])).unwrap();
        assert_eq!((t.concordant, t.discordant, t.m), (10, 2, 12));
        assert!((t.tau - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ties_and_missing_agree_with_naive() {
        let x = OrdinalVector::with_missing(
            "x",
            vec![Some(1.0), Some(1.0), Some(2.0), None, Some(3.0), Some(3.0), Some(-0.0), Some(0.0)],
        );
        let y = OrdinalVector::with_missing(
            "y",
            vec![Some(2.0), Some(1.0), Some(2.0), Some(5.0), None, Some(0.0), Some(4.0), Some(4.0)],
        );
        let fast = kendall_tau(&x, &y).unwrap();
        let slow = kendall_tau_naive(&x, &y).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast.m, 56);
    }

    #[test]
    fn merge_sort_counts_inversions() {
        let mut v = vec![3.0, 1.0, 2.0, 2.0, 0.0];
        assert_eq!(merge_sort_count(&mut v), 7);
        assert_eq!(v, vec![0.0, 1.0, 2.0, 2.0, 3.0]);
        let mut w: Vec<f64> = (0..37).rev().map(f64::from).collect();
        assert_eq!(merge_sort_count(&mut w), 37 * 36 / 2);
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn errors() {
        assert!(matches!(kendall_tau(&ov(&[1.0]), &ov(&[1.0])), Err(KendallError::TooFewObjects(1))));
        assert!(kendall_tau(&ov(&[1.0, 2.0]), &ov(&[1.0])).is_err());
    }
}
