//! Categorical sequences: the common input of every plug-in estimator.

use std::collections::HashMap;

use crate::error::{KendallError, Result};

/// A finite-alphabet sequence with optional missing positions.
///
/// Codes are dense in `0..levels()`. `None` marks a missing position, which
/// estimators exclude pairwise.
pub trait Categorical: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Alphabet size, not counting the missing marker.
    fn levels(&self) -> u32;

    fn code(&self, i: usize) -> Option<u32>;

    /// Writes `code(i)` for every position into `out` (`u32::MAX` for missing).
    ///
    /// Implementors with packed storage override this with a faster path.
    fn fill_codes(&self, out: &mut Vec<u32>) {
        out.clear();
        out.extend((0..self.len()).map(|i| self.code(i).unwrap_or(Labels::MISSING)));
    }
}

impl<T: Categorical + ?Sized> Categorical for &T {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn levels(&self) -> u32 {
        (**self).levels()
    }
    fn code(&self, i: usize) -> Option<u32> {
        (**self).code(i)
    }
    fn fill_codes(&self, out: &mut Vec<u32>) {
        (**self).fill_codes(out)
    }
}

/// Plain integer-coded categorical sequence (bin labels, class labels, joints).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    codes: Vec<u32>,
    levels: u32,
}

impl Labels {
    pub const MISSING: u32 = u32::MAX;

    /// Builds labels from raw codes; `None` entries become missing.
    pub fn new(codes: Vec<Option<u32>>, levels: u32) -> Result<Self> {
        let codes = codes
            .into_iter()
            .map(|c| match c {
                Some(c) if c >= levels => Err(KendallError::InvalidArgument(format!(
                    "code {c} outside alphabet of size {levels}"
                ))),
                Some(c) => Ok(c),
                None => Ok(Self::MISSING),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { codes, levels })
    }

    /// Codes with `u32::MAX` as the missing marker; every other code must be `< levels`.
    pub(crate) fn from_raw(codes: Vec<u32>, levels: u32) -> Self {
        debug_assert!(codes.iter().all(|&c| c == Self::MISSING || c < levels));
        Self { codes, levels }
    }

    /// Encodes arbitrary hashable values by order of first appearance.
    pub fn from_values<T, I>(values: I) -> Self
    where
        T: Eq + std::hash::Hash,
        I: IntoIterator<Item = Option<T>>,
    {
        let mut dict: HashMap<T, u32> = HashMap::new();
        let codes = values
            .into_iter()
            .map(|v| match v {
                Some(v) => {
                    let next = dict.len() as u32;
                    *dict.entry(v).or_insert(next)
                }
                None => Self::MISSING,
            })
            .collect();
        let levels = dict.len() as u32;
        Self { codes, levels }
    }

    pub fn codes(&self) -> impl Iterator<Item = Option<u32>> + '_ {
        self.codes.iter().map(|&c| (c != Self::MISSING).then_some(c))
    }
}

impl Categorical for Labels {
    fn len(&self) -> usize {
        self.codes.len()
    }
    fn levels(&self) -> u32 {
        self.levels
    }
    fn code(&self, i: usize) -> Option<u32> {
        let c = self.codes[i];
        (c != Self::MISSING).then_some(c)
    }
    fn fill_codes(&self, out: &mut Vec<u32>) {
        out.clear();
        out.extend_from_slice(&self.codes);
    }
}

/// Position-wise product of several categorical sequences.
///
/// Missing in any constituent makes the joint position missing. Joint codes
/// use mixed radix while the product alphabet fits in `u32`; beyond that
/// they are re-coded densely by first appearance.
pub fn make_joint(xs: &[&dyn Categorical]) -> Result<Labels> {
    let first = xs
        .first()
        .ok_or_else(|| KendallError::InvalidArgument("make_joint needs at least one sequence".into()))?;
    let len = first.len();
    for x in xs.iter().skip(1) {
        if x.len() != len {
            return Err(KendallError::length_mismatch_in(len, x.len(), "make_joint"));
        }
    }

    let product = xs
        .iter()
        .try_fold(1u64, |acc, x| acc.checked_mul(u64::from(x.levels().max(1))))
        .filter(|&p| p < u64::from(u32::MAX));

    let mut buf = Vec::with_capacity(len);
    if let Some(product) = product {
        let mut acc: Vec<u32> = vec![0; len];
        for x in xs {
            x.fill_codes(&mut buf);
            let levels = x.levels().max(1);
            for (a, &c) in acc.iter_mut().zip(buf.iter()) {
                if c == Labels::MISSING {
                    *a = Labels::MISSING;
                } else if *a != Labels::MISSING {
                    *a = *a * levels + c;
                }
            }
        }
        return Ok(Labels::from_raw(acc, product as u32));
    }

    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(xs.len());
    for x in xs {
        let mut col = Vec::with_capacity(len);
        x.fill_codes(&mut col);
        columns.push(col);
    }
    let tuples = (0..len).map(|i| {
        let tuple: Vec<u32> = columns.iter().map(|c| c[i]).collect();
        (!tuple.contains(&Labels::MISSING)).then_some(tuple)
    });
    Ok(Labels::from_values(tuples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn joint_of_two() {
        let x = Labels::new(vec![Some(0), Some(1)], 3).unwrap();
        let y = Labels::new(vec![Some(0), Some(0)], 3).unwrap();
        let j = make_joint(&[&x, &y]).unwrap();
        assert_eq!(j.levels(), 9);
        assert_eq!(j.codes().collect::<Vec<_>>(), vec![Some(0), Some(3)]);
    }

    #[test]
    fn joint_of_one_is_identity() {
        let x = Labels::new(vec![Some(2), None, Some(1)], 3).unwrap();
        let j = make_joint(&[&x]).unwrap();
        assert_eq!(j, x);
    }

    #[test]
    fn joint_propagates_missing() {
        let x = Labels::new(vec![Some(0), None], 3).unwrap();
        let y = Labels::new(vec![Some(0), Some(0)], 3).unwrap();
        let j = make_joint(&[&x, &y]).unwrap();
        assert_eq!(j.code(0), Some(0));
        assert_eq!(j.code(1), None);
    }

    #[test]
    fn joint_rejects_ragged() {
        let x = Labels::new(vec![Some(0)], 2).unwrap();
        let y = Labels::new(vec![Some(0), Some(1)], 2).unwrap();
        assert!(matches!(make_joint(&[&x, &y]), Err(KendallError::LengthMismatch { .. })));
        assert!(make_joint(&[]).is_err());
    }

    #[test]
    fn joint_falls_back_to_dense_coding() {
        let big = Labels::from_raw(vec![70_000, 1, 70_000], 70_001);
        let j = make_joint(&[&big, &big]).unwrap();
        assert_eq!(j.levels(), 2);
        assert_eq!(j.codes().collect::<Vec<_>>(), vec![Some(0), Some(1), Some(0)]);
    }

    #[test]
    fn from_values_orders_by_first_appearance() {
        let l = Labels::from_values(vec![Some("b"), Some("a"), None, Some("b")]);
        assert_eq!(l.levels(), 2);
        assert_eq!(l.codes().collect::<Vec<_>>(), vec![Some(0), Some(1), None, Some(0)]);
    }
}
