use std::fmt;

use crate::categorical::{Categorical, Labels};
use crate::error::{KendallError, Result};

use super::pairs::{pair_count, PairScheme};

/// Relation between the two objects of an ordered pair `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Symbol {
    /// `x_a < x_b`
    Asc = 0,
    /// `x_a > x_b`
    Desc = 1,
    /// `x_a = x_b`
    Tie = 2,
    /// Either value unknown, or the pair spans two batches.
    Missing = 3,
}

impl Symbol {
    /// Symbol of the reversed pair `(b, a)`.
    #[inline]
    pub fn flip(self) -> Self {
        match self {
            Symbol::Asc => Symbol::Desc,
            Symbol::Desc => Symbol::Asc,
            s => s,
        }
    }

    #[inline]
    pub(crate) fn from_bits(bits: u64) -> Self {
        match bits & 0b11 {
            0 => Symbol::Asc,
            1 => Symbol::Desc,
            2 => Symbol::Tie,
            _ => Symbol::Missing,
        }
    }

    /// Serialized form: `A`, `D`, `T` or `NA`.
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::Asc => "A",
            Symbol::Desc => "D",
            Symbol::Tie => "T",
            Symbol::Missing => "NA",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" => Some(Symbol::Asc),
            "D" => Some(Symbol::Desc),
            "T" => Some(Symbol::Tie),
            "NA" => Some(Symbol::Missing),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const PER_WORD: usize = 32;

/// Pair-relation sequence of length `n(n-1)`, packed at 2 bits per symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KendallSequence {
    n: usize,
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for KendallSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for s in self.iter().take(64) {
            list.entry(&s);
        }
        if self.len > 64 {
            list.entry(&format_args!("... ({} total)", self.len));
        }
        list.finish()?;
        write!(f, " n={}", self.n)
    }
}

impl KendallSequence {
    /// Sequence of `n(n-1)` copies of `symbol`.
    pub fn filled(n: usize, symbol: Symbol) -> Result<Self> {
        let scheme = PairScheme::new(n)?;
        let len = scheme.m();
        let mut word = 0u64;
        for k in 0..PER_WORD {
            word |= (symbol as u64) << (2 * k);
        }
        let mut words = vec![word; len.div_ceil(PER_WORD)];
        clear_tail(&mut words, len);
        Ok(Self { n, len, words })
    }

    pub fn from_symbols(n: usize, symbols: &[Symbol]) -> Result<Self> {
        let scheme = PairScheme::new(n)?;
        if symbols.len() != scheme.m() {
            return Err(KendallError::length_mismatch_in(
                scheme.m(),
                symbols.len(),
                "Kendall sequence",
            ));
        }
        let mut b = SequenceBuilder::with_capacity(n, symbols.len());
        for &s in symbols {
            b.push(s);
        }
        Ok(b.finish())
    }

    /// Number of source objects.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn scheme(&self) -> PairScheme {
        PairScheme::new(self.n).expect("sequence built with n >= 2")
    }

    #[inline]
    pub fn get(&self, index: usize) -> Symbol {
        assert!(index < self.len, "pair index {index} out of range {}", self.len);
        Symbol::from_bits(self.words[index / PER_WORD] >> (2 * (index % PER_WORD)))
    }

    /// Symbol of the ordered pair `(a, b)`.
    pub fn relation(&self, a: usize, b: usize) -> Result<Symbol> {
        let idx = self.scheme().pair_index(a, b)?;
        Ok(self.get(idx))
    }

    pub(crate) fn set(&mut self, index: usize, symbol: Symbol) {
        let w = &mut self.words[index / PER_WORD];
        let shift = 2 * (index % PER_WORD);
        *w = (*w & !(0b11 << shift)) | ((symbol as u64) << shift);
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Symbol> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<Symbol> {
        self.iter().collect()
    }

    /// Counts of `[Asc, Desc, Tie, Missing]`.
    pub fn symbol_counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for s in self.iter() {
            counts[s as usize] += 1;
        }
        counts
    }

    /// True when every `(a, b)` carries the flip of `(b, a)`.
    pub fn is_antisymmetric(&self) -> bool {
        let scheme = self.scheme();
        scheme.pairs().enumerate().all(|(k, (a, b))| {
            a > b || self.get(k).flip() == self.get(scheme.pair_index_unchecked(b, a))
        })
    }
}

impl Categorical for KendallSequence {
    fn len(&self) -> usize {
        self.len
    }

    fn levels(&self) -> u32 {
        3
    }

    #[inline]
    fn code(&self, i: usize) -> Option<u32> {
        match self.get(i) {
            Symbol::Missing => None,
            s => Some(s as u32),
        }
    }

    fn fill_codes(&self, out: &mut Vec<u32>) {
        out.clear();
        out.reserve(self.len);
        for (wi, &w) in self.words.iter().enumerate() {
            let take = (self.len - wi * PER_WORD).min(PER_WORD);
            for k in 0..take {
                let bits = ((w >> (2 * k)) & 0b11) as u32;
                out.push(if bits == 3 { Labels::MISSING } else { bits });
            }
        }
    }
}

fn clear_tail(words: &mut [u64], len: usize) {
    let rem = len % PER_WORD;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << (2 * rem)) - 1;
        }
    }
}

/// Appends symbols in pair-index order.
pub(crate) struct SequenceBuilder {
    n: usize,
    len: usize,
    words: Vec<u64>,
}

impl SequenceBuilder {
    pub(crate) fn with_capacity(n: usize, m: usize) -> Self {
        Self {
            n,
            len: 0,
            words: Vec::with_capacity(m.div_ceil(PER_WORD)),
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, s: Symbol) {
        let slot = self.len % PER_WORD;
        if slot == 0 {
            self.words.push(0);
        }
        *self.words.last_mut().unwrap() |= (s as u64) << (2 * slot);
        self.len += 1;
    }

    pub(crate) fn finish(self) -> KendallSequence {
        debug_assert_eq!(self.len, self.n * (self.n - 1));
        KendallSequence {
            n: self.n,
            len: self.len,
            words: self.words,
        }
    }
}

/// A named column of ordinal values; `None` marks a missing value.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalVector {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

impl OrdinalVector {
    /// NaN entries are treated as missing.
    pub fn new(name: impl Into<String>, values: impl IntoIterator<Item = f64>) -> Self {
        Self {
            name: name.into(),
            values: values
                .into_iter()
                .map(|v| (!v.is_nan()).then_some(v))
                .collect(),
        }
    }

    pub fn with_missing(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        let values = values
            .into_iter()
            .map(|v| v.filter(|x| !x.is_nan()))
            .collect();
        Self {
            name: name.into(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Applies `f` to every non-missing value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            name: self.name.clone(),
            values: self.values.iter().map(|v| v.map(&f)).collect(),
        }
    }

    /// Sub-vector of the given object indices, in that order.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            values: idx.iter().map(|&i| self.values[i]).collect(),
        }
    }

    pub fn has_missing(&self) -> bool {
        self.values.iter().any(Option::is_none)
    }
}

/// Comparison rule for the forward transform.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TransformOptions {
    /// When set, values within this absolute distance are tied. Off by default:
    /// only exactly equal values tie.
    pub tie_tolerance: Option<f64>,
}

#[inline]
fn compare(x: Option<f64>, y: Option<f64>, tol: Option<f64>) -> Symbol {
    match (x, y) {
        (Some(x), Some(y)) => {
            if let Some(t) = tol {
                if (x - y).abs() <= t {
                    return Symbol::Tie;
                }
            }
            if x < y {
                Symbol::Asc
            } else if x > y {
                Symbol::Desc
            } else {
                Symbol::Tie
            }
        }
        _ => Symbol::Missing,
    }
}

/// Forward Kendall transformation with exact tie detection.
pub fn kendall_transform(x: &OrdinalVector) -> Result<KendallSequence> {
    kendall_transform_with(x, TransformOptions::default())
}

pub fn kendall_transform_with(x: &OrdinalVector, opts: TransformOptions) -> Result<KendallSequence> {
    let n = x.len();
    if n < 2 {
        return Err(KendallError::TooFewObjects(n));
    }
    if let Some(t) = opts.tie_tolerance {
        if !(t >= 0.0) {
            return Err(KendallError::InvalidArgument(format!(
                "tie tolerance must be non-negative, got {t}"
            )));
        }
    }
    let m = pair_count(n)?;
    let mut b = SequenceBuilder::with_capacity(n, m);
    for a in 0..n {
        let xa = x.values[a];
        for (j, &xb) in x.values.iter().enumerate() {
            if j != a {
                b.push(compare(xa, xb, opts.tie_tolerance));
            }
        }
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol::*;

    #[test]
    fn transform_of_3_1_2() {
        let k = kendall_transform(&OrdinalVector::new("x", [3.0, 1.0, 2.0])).unwrap();
        assert_eq!(k.to_vec(), vec![Desc, Desc, Asc, Asc, Asc, Desc]);
        assert_eq!(k.n(), 3);
    }

    #[test]
    fn transform_with_tie() {
        let k = kendall_transform(&OrdinalVector::new("x", [1.0, 1.0, 2.0])).unwrap();
        assert_eq!(k.to_vec(), vec![Tie, Asc, Tie, Asc, Desc, Desc]);
    }

    #[test]
    fn missing_values_propagate() {
        let x = OrdinalVector::with_missing("x", vec![Some(1.0), None, Some(0.0)]);
        let k = kendall_transform(&x).unwrap();
        assert_eq!(k.to_vec(), vec![Missing, Desc, Missing, Missing, Asc, Missing]);
        let nan = OrdinalVector::new("x", [1.0, f64::NAN, 0.0]);
        assert_eq!(kendall_transform(&nan).unwrap(), k);
    }

    #[test]
    fn too_short() {
        assert_eq!(
            kendall_transform(&OrdinalVector::new("x", [1.0])),
            Err(KendallError::TooFewObjects(1))
        );
    }

    #[test]
    fn tolerance_ties() {
        let x = OrdinalVector::new("x", [1.0, 1.05, 3.0]);
        let exact = kendall_transform(&x).unwrap();
        assert_eq!(exact.symbol_counts()[Tie as usize], 0);
        let loose = kendall_transform_with(&x, TransformOptions { tie_tolerance: Some(0.1) }).unwrap();
        assert_eq!(loose.relation(0, 1).unwrap(), Tie);
        assert_eq!(loose.relation(1, 2).unwrap(), Asc);
    }

    #[test]
    fn packing_across_word_boundary() {
        // n = 7 gives 42 symbols, spanning two words.
        let x = OrdinalVector::new("x", [5.0, 2.0, 2.0, 9.0, 1.0, 7.0, 3.0]);
        let k = kendall_transform(&x).unwrap();
        let scheme = k.scheme();
        for (idx, (a, b)) in scheme.pairs().enumerate() {
            assert_eq!(k.get(idx), compare(x.values[a], x.values[b], None));
        }
        let mut codes = Vec::new();
        k.fill_codes(&mut codes);
        assert_eq!(codes.len(), 42);
        for (i, &c) in codes.iter().enumerate() {
            assert_eq!(k.code(i).unwrap_or(Labels::MISSING), c);
        }
        let rebuilt = KendallSequence::from_symbols(7, &k.to_vec()).unwrap();
        assert_eq!(rebuilt, k);
    }

    #[test]
    fn filled_and_set() {
        let mut k = KendallSequence::filled(6, Missing).unwrap();
        assert_eq!(k.symbol_counts(), [0, 0, 0, 30]);
        k.set(29, Asc);
        assert_eq!(k.get(29), Asc);
        assert_eq!(k.get(28), Missing);
        let t = KendallSequence::filled(6, Tie).unwrap();
        assert_eq!(t, kendall_transform(&OrdinalVector::new("c", [4.0; 6])).unwrap());
    }

    #[test]
    fn symbol_serialization() {
        for s in [Asc, Desc, Tie, Missing] {
            assert_eq!(Symbol::parse(s.as_str()), Some(s));
            assert_eq!(s.flip().flip(), s);
        }
        assert_eq!(Symbol::parse("x"), None);
    }
}
