use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::categorical::{make_joint, Categorical, Labels};
use crate::error::{KendallError, Result};
use crate::infotheory::mutual_information;
use crate::transform::{expand_categorical, kendall_transform, KendallSequence, OrdinalVector, TransformedSystem};

use super::binning::{bin_equal_frequency, bin_equal_width};

/// How features and decision are made categorical before scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Kendall,
    EqualWidth(usize),
    EqualFrequency(usize),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Kendall => f.write_str("kendall"),
            Method::EqualWidth(k) => write!(f, "width:{k}"),
            Method::EqualFrequency(k) => write!(f, "freq:{k}"),
        }
    }
}

impl FromStr for Method {
    type Err = KendallError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            KendallError::InvalidArgument(format!(
                "unknown method '{s}', expected kendall, width:<k> or freq:<k>"
            ))
        };
        if s == "kendall" {
            return Ok(Method::Kendall);
        }
        let (kind, k) = s.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        match kind {
            "width" => Ok(Method::EqualWidth(k)),
            "freq" => Ok(Method::EqualFrequency(k)),
            _ => Err(bad()),
        }
    }
}

/// The variable features are scored against.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    /// Numeric or binary decision, processed the same way as features.
    Numeric(OrdinalVector),
    /// Unordered classes. Under the Kendall method they are expanded one-vs-rest
    /// and the joint of the indicator transforms is scored against.
    Categorical(Vec<Option<String>>),
}

impl Decision {
    pub fn len(&self) -> usize {
        match self {
            Decision::Numeric(v) => v.len(),
            Decision::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ordinal columns whose transforms jointly encode the decision.
    pub fn kendall_columns(&self) -> Result<Vec<OrdinalVector>> {
        match self {
            Decision::Numeric(v) => Ok(vec![v.clone()]),
            Decision::Categorical(v) => expand_categorical(v),
        }
    }

    pub fn select(&self, idx: &[usize]) -> Self {
        match self {
            Decision::Numeric(v) => Decision::Numeric(v.select(idx)),
            Decision::Categorical(v) => Decision::Categorical(idx.iter().map(|&i| v[i].clone()).collect()),
        }
    }
}

/// Features ordered by decreasing score; equal scores keep input order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub method: String,
    pub entries: Vec<(String, f64)>,
}

impl FeatureRanking {
    /// Sorts `(name, score)` pairs given in input column order.
    pub fn from_scores(method: impl Into<String>, scores: Vec<(String, f64)>) -> Self {
        let mut entries = scores;
        entries.sort_by(|a, b| b.1.total_cmp(&a.1));
        Self {
            method: method.into(),
            entries,
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.0.as_str())
    }

    pub fn score(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == name).map(|e| e.1)
    }

    /// Scores in the order of `names`.
    pub fn scores_for<S: AsRef<str>>(&self, names: &[S]) -> Option<Vec<f64>> {
        names.iter().map(|n| self.score(n.as_ref())).collect()
    }
}

enum Processed {
    Seq(KendallSequence),
    Labels(Labels),
    Constant,
}

impl Processed {
    fn as_categorical(&self) -> Option<&dyn Categorical> {
        match self {
            Processed::Seq(s) => Some(s),
            Processed::Labels(l) => Some(l),
            Processed::Constant => None,
        }
    }
}

fn process_feature(x: &OrdinalVector, method: Method) -> Result<Processed> {
    let binned = match method {
        Method::Kendall => return kendall_transform(x).map(Processed::Seq),
        Method::EqualWidth(k) => bin_equal_width(x, k),
        Method::EqualFrequency(k) => bin_equal_frequency(x, k),
    };
    match binned {
        Ok(l) => Ok(Processed::Labels(l)),
        Err(KendallError::Degenerate(_)) => Ok(Processed::Constant),
        Err(e) => Err(e),
    }
}

fn process_decision(decision: &Decision, method: Method) -> Result<Processed> {
    let processed = match (decision, method) {
        (Decision::Categorical(_), Method::Kendall) => {
            let seqs = decision
                .kendall_columns()?
                .iter()
                .map(kendall_transform)
                .collect::<Result<Vec<_>>>()?;
            joint_of(seqs)?
        }
        (Decision::Categorical(v), _) => {
            let l = Labels::from_values(v.iter().map(|c| c.as_deref()));
            if l.levels() < 2 {
                return Err(KendallError::Degenerate("decision has a single class".into()));
            }
            Processed::Labels(l)
        }
        (Decision::Numeric(v), m) => process_feature(v, m)?,
    };
    if matches!(processed, Processed::Constant) {
        return Err(KendallError::Degenerate("decision is constant".into()));
    }
    Ok(processed)
}

fn joint_of(mut seqs: Vec<KendallSequence>) -> Result<Processed> {
    if seqs.len() == 1 {
        return Ok(Processed::Seq(seqs.pop().expect("one sequence")));
    }
    let refs: Vec<&dyn Categorical> = seqs.iter().map(|s| s as &dyn Categorical).collect();
    Ok(Processed::Labels(make_joint(&refs)?))
}

/// Plug-in MI between each processed feature and the processed decision.
pub fn rank_features(table: &[OrdinalVector], decision: &Decision, method: Method) -> Result<FeatureRanking> {
    for col in table {
        if col.len() != decision.len() {
            return Err(KendallError::length_mismatch_in(
                decision.len(),
                col.len(),
                format!("feature '{}'", col.name),
            ));
        }
    }
    let target = process_decision(decision, method)?;
    let target = target.as_categorical().expect("decision checked non-constant");
    let scores = table
        .par_iter()
        .map(|col| {
            let score = match process_feature(col, method)? {
                Processed::Constant => 0.0,
                p => mutual_information(p.as_categorical().expect("non-constant"), target)?,
            };
            Ok((col.name.clone(), score))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureRanking::from_scores(method.to_string(), scores))
}

/// Ranks the features of an already transformed system against one of its
/// columns, or against the joint of several columns (expanded categorical).
pub fn rank_transformed(system: &TransformedSystem, decision: &[&str]) -> Result<FeatureRanking> {
    let target_seqs = decision
        .iter()
        .map(|name| {
            system
                .column(name)
                .cloned()
                .ok_or_else(|| KendallError::InvalidArgument(format!("unknown decision column '{name}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    let excluded: HashSet<&str> = decision.iter().copied().collect();
    let (names, seqs): (Vec<String>, Vec<KendallSequence>) = system
        .iter()
        .filter(|(name, _)| !excluded.contains(name))
        .map(|(name, seq)| (name.to_string(), seq.clone()))
        .unzip();
    rank_sequences(&names, &seqs, target_seqs)
}

/// Kendall-method ranking of transformed features against the joint of
/// `target` sequences.
pub(crate) fn rank_sequences(
    names: &[String],
    features: &[KendallSequence],
    target: Vec<KendallSequence>,
) -> Result<FeatureRanking> {
    let target = joint_of(target)?;
    let target = target.as_categorical().expect("transformed decision");
    let scores = names
        .par_iter()
        .zip(features.par_iter())
        .map(|(name, seq)| Ok((name.clone(), mutual_information(seq, target)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureRanking::from_scores(Method::Kendall.to_string(), scores))
}

/// Best Jaccard index between a top-`c` prefix of the ranking and `reference`,
/// over all cut-offs `c`.
pub fn jaccard_max<S: AsRef<str>>(ranking: &FeatureRanking, reference: &[S]) -> Result<f64> {
    let reference: HashSet<&str> = reference.iter().map(AsRef::as_ref).collect();
    if reference.is_empty() {
        return Err(KendallError::InvalidArgument("reference set is empty".into()));
    }
    let ranked: HashSet<&str> = ranking.names().collect();
    if let Some(missing) = reference.iter().find(|r| !ranked.contains(*r)) {
        return Err(KendallError::InvalidArgument(format!(
            "reference feature '{missing}' is not in the ranking"
        )));
    }
    let mut hits = 0usize;
    let mut best = 0.0f64;
    for (c, name) in ranking.names().enumerate() {
        if reference.contains(name) {
            hits += 1;
        }
        let union = (c + 1) + reference.len() - hits;
        best = best.max(hits as f64 / union as f64);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::transform_system;
    use std::f64::consts::LN_2;

    fn ov(name: &str, v: &[f64]) -> OrdinalVector {
        OrdinalVector::new(name, v.iter().copied())
    }

    fn ranking(names: &[&str]) -> FeatureRanking {
        let n = names.len();
        FeatureRanking::from_scores(
            "test",
            names.iter().enumerate().map(|(i, s)| (s.to_string(), (n - i) as f64)).collect(),
        )
    }

    #[test]
    fn method_parsing() {
        assert_eq!("kendall".parse::<Method>().unwrap(), Method::Kendall);
        assert_eq!("width:3".parse::<Method>().unwrap(), Method::EqualWidth(3));
        assert_eq!("freq:5".parse::<Method>().unwrap(), Method::EqualFrequency(5));
        for bad in ["width", "freq:x", "bins:3", ""] {
            assert!(bad.parse::<Method>().is_err(), "{bad}");
        }
        assert_eq!(Method::EqualWidth(3).to_string(), "width:3");
    }

    #[test]
    fn copy_of_decision_ranks_first() {
        let d = [0.3, 1.9, -0.4, 2.2, 0.8, 1.1];
        let table = vec![
            ov("noise", &[1.0, 0.0, 3.0, 2.0, 5.0, 4.0]),
            ov("copy", &d),
            ov("flat", &[1.0; 6]),
        ];
        let r = rank_features(&table, &Decision::Numeric(ov("d", &d)), Method::Kendall).unwrap();
        assert_eq!(r.entries[0].0, "copy");
        assert!((r.entries[0].1 - LN_2).abs() < 1e-15);
        assert_eq!(r.score("flat"), Some(0.0));
        assert_eq!(r.method, "kendall");
    }

    #[test]
    fn binned_methods_score_constant_features_zero() {
        let d = [0.3, 1.9, -0.4, 2.2, 0.8, 1.1];
        let table = vec![ov("flat", &[1.0; 6]), ov("copy", &d)];
        for m in [Method::EqualWidth(3), Method::EqualFrequency(3)] {
            let r = rank_features(&table, &Decision::Numeric(ov("d", &d)), m).unwrap();
            assert_eq!(r.entries[0].0, "copy");
            assert_eq!(r.score("flat"), Some(0.0));
        }
    }

    #[test]
    fn equal_scores_keep_input_order() {
        let r = FeatureRanking::from_scores(
            "t",
            vec![("b".into(), 0.1), ("a".into(), 0.5), ("c".into(), 0.1), ("d".into(), 0.1)],
        );
        assert_eq!(r.names().collect::<Vec<_>>(), vec!["a", "b", "c", "d"]);
    }

    #[test]
    fn kendall_scores_are_monotone_invariant() {
        let d = ov("d", &[0.5, 2.0, 1.0, 4.0, 3.0, 0.1, 2.5]);
        let table = vec![
            ov("x", &[1.0, 2.0, 2.0, 5.0, 3.0, 0.0, 1.5]),
            ov("y", &[7.0, 1.0, 3.0, 2.0, 2.0, 9.0, 4.0]),
        ];
        let warped: Vec<_> = table.iter().map(|c| c.map(|v| v.powi(3) * 2.0 + 1.0)).collect();
        let base = rank_features(&table, &Decision::Numeric(d.clone()), Method::Kendall).unwrap();
        let w = rank_features(&warped, &Decision::Numeric(d.map(f64::exp)), Method::Kendall).unwrap();
        assert_eq!(base, w);
    }

    #[test]
    fn categorical_decision() {
        let classes: Vec<Option<String>> =
            ["a", "b", "c", "a", "b", "c"].iter().map(|s| Some(s.to_string())).collect();
        let table = vec![ov("sep", &[1.0, 2.0, 3.0, 1.1, 2.1, 3.1]), ov("mix", &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0])];
        let d = Decision::Categorical(classes);
        for m in [Method::Kendall, Method::EqualWidth(3)] {
            let r = rank_features(&table, &d, m).unwrap();
            assert_eq!(r.entries[0].0, "sep", "{m}");
        }
        let single = Decision::Categorical(vec![Some("a".into()); 6]);
        assert!(rank_features(&table, &single, Method::Kendall).is_err());
        assert!(rank_features(&table, &single, Method::EqualWidth(3)).is_err());
    }

    #[test]
    fn transformed_ranking_matches_direct_ranking() {
        let d = ov("d", &[0.5, 2.0, 1.0, 4.0, 3.0]);
        let table = vec![ov("x", &[1.0, 2.0, 2.0, 5.0, 3.0]), ov("y", &[7.0, 1.0, 3.0, 2.0, 2.0])];
        let direct = rank_features(&table, &Decision::Numeric(d.clone()), Method::Kendall).unwrap();
        let mut all = table.clone();
        all.push(d);
        let sys = transform_system(&all).unwrap();
        assert_eq!(rank_transformed(&sys, &["d"]).unwrap(), direct);
        assert!(rank_transformed(&sys, &["zzz"]).is_err());
    }

    #[test]
    fn jaccard_perfect_prefix() {
        let r = ranking(&["a", "b", "c", "d"]);
        assert_eq!(jaccard_max(&r, &["b", "a"]).unwrap(), 1.0);
        assert_eq!(jaccard_max(&r, &["a"]).unwrap(), 1.0);
    }

    #[test]
    fn jaccard_last_place_singleton() {
        let names: Vec<String> = (0..10).map(|i| format!("f{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let r = ranking(&refs);
        // only the full cut-off contains f9: 1 / 10
        assert!((jaccard_max(&r, &["f9"]).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn jaccard_hand_enumerated() {
        // ranking a b c d e, reference {b, d}
        // c=1: 0/3, c=2: 1/3, c=3: 1/4, c=4: 2/4, c=5: 2/5
        let r = ranking(&["a", "b", "c", "d", "e"]);
        assert!((jaccard_max(&r, &["b", "d"]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jaccard_errors() {
        let r = ranking(&["a", "b"]);
        assert!(jaccard_max::<&str>(&r, &[]).is_err());
        assert!(jaccard_max(&r, &["z"]).is_err());
    }
}
