//! Canonical ordering of the `n(n-1)` ordered object pairs.
//!
//! Pairs are laid out row-major over the `n x n` relation matrix with the
//! diagonal removed: the outer loop runs over the first object `a`, the inner
//! over the second object `b != a`. Index math is O(1) both ways.

use crate::error::{KendallError, Result};

/// Identifier written into serialized transformed systems.
pub const SCHEME_ID: &str = "rowmajor-v1";

/// Bijection between pair indices `0..m` and ordered pairs `(a, b)`, `a != b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairScheme {
    n: usize,
}

impl PairScheme {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(KendallError::TooFewObjects(n));
        }
        pair_count(n)?;
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of ordered pairs, `n(n-1)`.
    pub fn m(&self) -> usize {
        self.n * (self.n - 1)
    }

    #[inline]
    pub fn pair_at(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.m() {
            return Err(KendallError::PairIndexOutOfRange {
                index,
                n: self.n,
                m: self.m(),
            });
        }
        Ok(self.pair_at_unchecked(index))
    }

    #[inline]
    pub fn pair_index(&self, a: usize, b: usize) -> Result<usize> {
        if a == b || a >= self.n || b >= self.n {
            return Err(KendallError::InvalidPair { a, b, n: self.n });
        }
        Ok(self.pair_index_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn pair_at_unchecked(&self, index: usize) -> (usize, usize) {
        let row = self.n - 1;
        let a = index / row;
        let r = index % row;
        let b = if r < a { r } else { r + 1 };
        (a, b)
    }

    #[inline]
    pub(crate) fn pair_index_unchecked(&self, a: usize, b: usize) -> usize {
        a * (self.n - 1) + if b < a { b } else { b - 1 }
    }

    /// Iterates all pairs in index order.
    pub fn pairs(self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
    }
}

/// `n(n-1)`, guarded against overflow.
pub fn pair_count(n: usize) -> Result<usize> {
    if n < 2 {
        return Ok(0);
    }
    n.checked_mul(n - 1)
        .ok_or_else(|| KendallError::InvalidArgument(format!("n = {n} overflows the pair count")))
}

/// Ordered pair `(a, b)` at `index` under the canonical scheme.
pub fn pair_at(index: usize, n: usize) -> Result<(usize, usize)> {
    PairScheme::new(n)?.pair_at(index)
}

/// Inverse of [`pair_at`].
pub fn pair_index(a: usize, b: usize, n: usize) -> Result<usize> {
    PairScheme::new(n)?.pair_index(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_and_last_pairs() {
        assert_eq!(pair_at(0, 3).unwrap(), (0, 1));
        assert_eq!(pair_at(5, 3).unwrap(), (2, 1));
        let expected = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        for (k, p) in expected.iter().enumerate() {
            assert_eq!(pair_at(k, 3).unwrap(), *p);
        }
    }

    #[test]
    fn round_trip_n4() {
        for k in 0..12 {
            let (a, b) = pair_at(k, 4).unwrap();
            assert_eq!(pair_index(a, b, 4).unwrap(), k);
        }
    }

    #[test]
    fn exhaustive_bijection_up_to_32() {
        for n in 2..=32 {
            let scheme = PairScheme::new(n).unwrap();
            let mut seen = vec![false; scheme.m()];
            for (k, (a, b)) in scheme.pairs().enumerate() {
                assert_eq!(scheme.pair_at(k).unwrap(), (a, b));
                let idx = scheme.pair_index(a, b).unwrap();
                assert_eq!(idx, k);
                assert!(!seen[idx]);
                seen[idx] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(pair_at(6, 3), Err(KendallError::PairIndexOutOfRange { .. })));
        assert!(matches!(pair_at(0, 1), Err(KendallError::TooFewObjects(1))));
        assert!(matches!(pair_index(1, 1, 3), Err(KendallError::InvalidPair { .. })));
        assert!(matches!(pair_index(0, 3, 3), Err(KendallError::InvalidPair { .. })));
    }
}
