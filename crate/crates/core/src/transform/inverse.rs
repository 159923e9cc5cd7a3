//! Inverse transformation by Copeland scoring.
//!
//! Every object collects +1 for each pair in which it is the smaller element
//! and -1 for each pair in which it is the larger one; ordering by decreasing
//! score recovers the ascending order of the original values. Sequences that
//! no ranking could have produced (cycles, partial information) are scored by
//! the same rule, so cycles collapse into tied ranks.

use crate::error::{KendallError, Result};
use crate::ranks::fractional_ranks;

use super::pairs::PairScheme;
use super::sequence::{KendallSequence, Symbol};

/// Recovered ordering of `n` objects.
///
/// `ranks[i] = 1` is the object with the highest Copeland score, which for a
/// valid transform is the one with the smallest original value. Equal scores
/// share the average of their positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub ranks: Vec<f64>,
    pub scores: Vec<f64>,
}

impl Ranking {
    pub fn from_scores(scores: Vec<f64>) -> Self {
        let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
        Self {
            ranks: fractional_ranks(&neg),
            scores,
        }
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Object indices sorted by decreasing score; ties keep index order.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.scores.len()).collect();
        idx.sort_by(|&i, &j| self.scores[j].total_cmp(&self.scores[i]));
        idx
    }

    pub fn all_tied(&self) -> bool {
        self.scores.windows(2).all(|w| w[0] == w[1])
    }
}

/// Copeland inverse of a Kendall-transformed feature.
///
/// Tied and missing pairs contribute nothing to either object.
pub fn copeland_inverse(k: &KendallSequence) -> Ranking {
    let n = k.n();
    let row = n - 1;
    let mut scores = vec![0.0; n];
    for (idx, s) in k.iter().enumerate() {
        let a = idx / row;
        match s {
            Symbol::Asc => scores[a] += 1.0,
            Symbol::Desc => scores[a] -= 1.0,
            Symbol::Tie | Symbol::Missing => {}
        }
    }
    Ranking::from_scores(scores)
}

/// Vote weights of one ordered pair for each of the three relations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairVote {
    pub asc: f64,
    pub desc: f64,
    pub tie: f64,
}

impl PairVote {
    pub fn new(asc: f64, desc: f64, tie: f64) -> Self {
        Self { asc, desc, tie }
    }

    /// One-hot vote for a single symbol; `Missing` casts no vote.
    pub fn one_hot(s: Symbol) -> Self {
        match s {
            Symbol::Asc => Self::new(1.0, 0.0, 0.0),
            Symbol::Desc => Self::new(0.0, 1.0, 0.0),
            Symbol::Tie => Self::new(0.0, 0.0, 1.0),
            Symbol::Missing => Self::default(),
        }
    }

    fn margin(&self) -> f64 {
        self.asc - self.desc
    }
}

/// Per-pair weighted votes over the canonical pair scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct PairVotes {
    n: usize,
    votes: Vec<PairVote>,
}

impl PairVotes {
    pub fn new(n: usize, votes: Vec<PairVote>) -> Result<Self> {
        let scheme = PairScheme::new(n)?;
        if votes.len() != scheme.m() {
            return Err(KendallError::length_mismatch_in(scheme.m(), votes.len(), "pair votes"));
        }
        for (idx, v) in votes.iter().enumerate() {
            for w in [v.asc, v.desc, v.tie] {
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(KendallError::InvalidArgument(format!(
                        "vote weight {w} at pair {idx} must be finite and non-negative"
                    )));
                }
            }
        }
        Ok(Self { n, votes })
    }

    pub fn from_sequence(k: &KendallSequence) -> Self {
        Self {
            n: k.n(),
            votes: k.iter().map(PairVote::one_hot).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn votes(&self) -> &[PairVote] {
        &self.votes
    }
}

/// Copeland scoring over weighted votes.
///
/// A vote on `(a, b)` is also read as the mirrored vote on `(b, a)`, and each
/// object's score averages the two readings:
/// `score(i) = 1/2 * sum_j [(asc(i,j) - desc(i,j)) + (desc(j,i) - asc(j,i))]`.
/// For one-hot votes of any antisymmetric sequence this equals the plain
/// Copeland score exactly.
pub fn weighted_copeland(votes: &PairVotes) -> Ranking {
    let n = votes.n;
    let scheme = PairScheme::new(n).expect("validated on construction");
    let mut scores = vec![0.0; n];
    for (idx, v) in votes.votes.iter().enumerate() {
        let (a, b) = scheme.pair_at_unchecked(idx);
        let margin = v.margin();
        scores[a] += 0.5 * margin;
        scores[b] -= 0.5 * margin;
    }
    Ranking::from_scores(scores)
}

#[cfg(test)]
mod tests {
    use super::super::sequence::{kendall_transform, OrdinalVector};
    use super::*;
    use Symbol::*;

    #[test]
    fn inverse_of_3_1_2() {
        let k = kendall_transform(&OrdinalVector::new("x", [3.0, 1.0, 2.0])).unwrap();
        let r = copeland_inverse(&k);
        assert_eq!(r.scores, vec![-2.0, 2.0, 0.0]);
        assert_eq!(r.order(), vec![1, 2, 0]);
        assert_eq!(r.ranks, vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn three_cycle_is_all_tied() {
        let k = KendallSequence::from_symbols(3, &[Asc, Desc, Desc, Asc, Asc, Desc]).unwrap();
        let r = copeland_inverse(&k);
        assert_eq!(r.scores, vec![0.0; 3]);
        assert_eq!(r.ranks, vec![2.0; 3]);
        assert!(r.all_tied());
    }

    #[test]
    fn all_tie_and_all_missing_are_tied() {
        for s in [Tie, Missing] {
            let r = copeland_inverse(&KendallSequence::filled(5, s).unwrap());
            assert!(r.all_tied());
            assert_eq!(r.ranks, vec![3.0; 5]);
        }
    }

    #[test]
    fn ties_in_input_give_shared_ranks() {
        let k = kendall_transform(&OrdinalVector::new("x", [2.0, 1.0, 2.0, 5.0])).unwrap();
        let r = copeland_inverse(&k);
        assert_eq!(r.ranks, vec![2.5, 1.0, 2.5, 4.0]);
    }

    #[test]
    fn one_hot_votes_match_plain_copeland() {
        let k = kendall_transform(&OrdinalVector::new("x", [0.3, -1.0, 2.5, 0.0, 0.3])).unwrap();
        let w = weighted_copeland(&PairVotes::from_sequence(&k));
        assert_eq!(w, copeland_inverse(&k));
    }

    #[test]
    fn uniform_votes_tie_everything() {
        let votes = vec![PairVote::new(0.2, 0.2, 0.6); 12];
        let r = weighted_copeland(&PairVotes::new(4, votes).unwrap());
        assert!(r.all_tied());
    }

    #[test]
    fn single_confident_pair() {
        // n = 3; pair (0,1) leans ASC, every other pair votes uniformly.
        let third = 1.0 / 3.0;
        let mut votes = vec![PairVote::new(third, third, third); 6];
        votes[0] = PairVote::new(0.9, 0.05, 0.05);
        let r = weighted_copeland(&PairVotes::new(3, votes).unwrap());
        // score(0) = 0.425, score(1) = -0.425, score(2) = 0
        assert!((r.scores[0] - 0.425).abs() < 1e-12);
        assert!((r.scores[1] + 0.425).abs() < 1e-12);
        assert!(r.scores[2].abs() < 1e-12);
        assert_eq!(r.order(), vec![0, 2, 1]);
        assert_eq!(r.ranks, vec![1.0, 3.0, 2.0]);
    }

    #[test]
    fn rejects_negative_weight() {
        let mut votes = vec![PairVote::default(); 2];
        votes[1].desc = -0.1;
        assert!(matches!(PairVotes::new(2, votes), Err(KendallError::InvalidArgument(_))));
        assert!(PairVotes::new(3, vec![PairVote::default(); 5]).is_err());
    }
}
