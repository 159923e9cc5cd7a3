//! Seeded Monte-Carlo experiments.
//!
//! Every replicate draws from its own ChaCha stream derived from
//! `(seed, replicate index)`, so results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::categorical::Categorical;
use crate::error::{KendallError, Result};
use crate::infotheory::{conditional_mi, interaction_information, make_joint, mi_from_rho, mutual_information};
use crate::integrate::{merge_transformed, BatchMap};
use crate::transform::{kendall_transform, OrdinalVector};

use super::binning::bin_equal_width;
use super::ranking::{rank_features, rank_sequences, Decision, Method};
use super::stats::{pearson, quantiles, spearman};

/// Percentile levels reported by every summary.
pub const PERCENTILES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

pub(crate) fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    rng
}

/// Per-replicate estimates of one experiment, keyed by estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub estimators: Vec<String>,
    /// `values[e][rep]`: estimate of estimator `e` in replicate `rep`.
    pub values: Vec<Vec<f64>>,
}

impl SimResult {
    pub fn reps(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn get(&self, estimator: &str) -> Option<&[f64]> {
        self.estimators
            .iter()
            .position(|e| e == estimator)
            .map(|i| self.values[i].as_slice())
    }

    /// 5th, 25th, 50th, 75th and 95th percentile (type 7).
    pub fn percentiles(&self, estimator: &str) -> Option<[f64; 5]> {
        let q = quantiles(self.get(estimator)?, &PERCENTILES);
        Some([q[0], q[1], q[2], q[3], q[4]])
    }

    pub fn median(&self, estimator: &str) -> Option<f64> {
        self.percentiles(estimator).map(|p| p[2])
    }
}

/// Estimators compared on bivariate normal samples.
pub const BIVARIATE_ESTIMATORS: [&str; 4] = ["kendall", "width3", "width5", "gauss"];

/// MI estimates for samples of a standard bivariate normal with correlation `r`.
///
/// `kendall` is the plug-in MI of the transforms, `width3`/`width5` the plug-in
/// MI after equal-width binning, `gauss` the Gaussian formula on the sample
/// Pearson correlation.
pub fn simulate_bivariate(r: f64, n: usize, reps: usize, seed: u64) -> Result<SimResult> {
    if !(r.abs() < 1.0) {
        return Err(KendallError::InvalidArgument(format!("r must lie in (-1, 1), got {r}")));
    }
    if n < 5 {
        return Err(KendallError::InvalidArgument(format!("need n >= 5 samples, got {n}")));
    }
    let per_rep = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, rep);
            let c = (1.0 - r * r).sqrt();
            let (xs, ys): (Vec<f64>, Vec<f64>) = (0..n)
                .map(|_| {
                    let z1: f64 = rng.sample(StandardNormal);
                    let z2: f64 = rng.sample(StandardNormal);
                    (z1, r * z1 + c * z2)
                })
                .unzip();
            bivariate_estimates(&xs, &ys)
        })
        .collect::<Result<Vec<_>>>()?;
    let values = (0..BIVARIATE_ESTIMATORS.len())
        .map(|e| per_rep.iter().map(|row| row[e]).collect())
        .collect();
    Ok(SimResult {
        estimators: BIVARIATE_ESTIMATORS.iter().map(|s| s.to_string()).collect(),
        values,
    })
}

fn bivariate_estimates(xs: &[f64], ys: &[f64]) -> Result<[f64; 4]> {
    let x = OrdinalVector::new("x", xs.iter().copied());
    let y = OrdinalVector::new("y", ys.iter().copied());
    let kendall = mutual_information(&kendall_transform(&x)?, &kendall_transform(&y)?)?;
    let binned = |k| -> Result<f64> { mutual_information(&bin_equal_width(&x, k)?, &bin_equal_width(&y, k)?) };
    let gauss = mi_from_rho(pearson(xs, ys)?).unwrap_or(f64::INFINITY);
    Ok([kendall, binned(3)?, binned(5)?, gauss])
}

/// How the decision combines the two relevant features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mixture {
    /// `y = a*lambda + b*(1 - lambda)`
    Linear,
    /// `y = max(a*lambda, b*(1 - lambda))`
    Max,
}

impl std::str::FromStr for Mixture {
    type Err = KendallError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Mixture::Linear),
            "max" => Ok(Mixture::Max),
            _ => Err(KendallError::InvalidArgument(format!("unknown mixture '{s}', expected linear or max"))),
        }
    }
}

/// Information scores of the three-feature system `a, b, c ~ U(0,1)` and
/// decision `y`, all on transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultivariateScores {
    pub lambda: f64,
    /// `I(A;Y)`
    pub mi_a: f64,
    /// `I(B;Y)`
    pub mi_b: f64,
    /// `I(A,B;Y)`
    pub mi_ab: f64,
    /// `I(A;B|Y)`
    pub cmi_ab: f64,
    /// `I(A;C|Y)`, irrelevant-feature baseline
    pub cmi_ac: f64,
    /// `I(A;B;Y)`
    pub interaction: f64,
}

impl MultivariateScores {
    pub const NAMES: [&'static str; 6] = ["I(A;Y)", "I(B;Y)", "I(A,B;Y)", "I(A;B|Y)", "I(A;C|Y)", "I(A;B;Y)"];

    pub fn values(&self) -> [f64; 6] {
        [self.mi_a, self.mi_b, self.mi_ab, self.cmi_ab, self.cmi_ac, self.interaction]
    }
}

fn check_multivariate(lambda: f64, n: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(KendallError::InvalidArgument(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    if n < 20 {
        return Err(KendallError::InvalidArgument(format!("need n >= 20 objects, got {n}")));
    }
    Ok(())
}

/// One realisation of the interaction experiment.
pub fn simulate_multivariate(lambda: f64, kind: Mixture, n: usize, seed: u64) -> Result<MultivariateScores> {
    check_multivariate(lambda, n)?;
    multivariate_replicate(lambda, kind, n, &mut replicate_rng(seed, 0))
}

/// `reps` independent realisations; replicate 0 equals [`simulate_multivariate`].
pub fn simulate_multivariate_reps(
    lambda: f64,
    kind: Mixture,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<MultivariateScores>> {
    check_multivariate(lambda, n)?;
    (0..reps)
        .into_par_iter()
        .map(|rep| multivariate_replicate(lambda, kind, n, &mut replicate_rng(seed, rep)))
        .collect()
}

fn multivariate_replicate(lambda: f64, kind: Mixture, n: usize, rng: &mut ChaCha8Rng) -> Result<MultivariateScores> {
    let mut draw = || -> Vec<f64> { (0..n).map(|_| rng.random::<f64>()).collect() };
    let (a, b, c) = (draw(), draw(), draw());
    let y: Vec<f64> = a
        .iter()
        .zip(&b)
        .map(|(&a, &b)| match kind {
            Mixture::Linear => a * lambda + b * (1.0 - lambda),
            Mixture::Max => (a * lambda).max(b * (1.0 - lambda)),
        })
        .collect();
    let t = |name: &str, v: &[f64]| kendall_transform(&OrdinalVector::new(name, v.iter().copied()));
    let (ka, kb, kc, ky) = (t("a", &a)?, t("b", &b)?, t("c", &c)?, t("y", &y)?);
    let ab = make_joint(&[&ka as &dyn Categorical, &kb])?;
    Ok(MultivariateScores {
        lambda,
        mi_a: mutual_information(&ka, &ky)?,
        mi_b: mutual_information(&kb, &ky)?,
        mi_ab: mutual_information(&ab, &ky)?,
        cmi_ab: conditional_mi(&ka, &kb, &ky)?,
        cmi_ac: conditional_mi(&ka, &kc, &ky)?,
        interaction: interaction_information(&ka, &kb, &ky)?,
    })
}

/// Agreement of perturbed-data rankings with the unperturbed ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationResult {
    pub features: Vec<String>,
    /// Kendall-method scores on the unperturbed table, in feature order.
    pub reference_scores: Vec<f64>,
    /// Per replicate: scores after merging independently transformed halves.
    pub transformed_scores: Vec<Vec<f64>>,
    /// Per replicate: scores after merging raw halves, then transforming.
    pub naive_scores: Vec<Vec<f64>>,
    /// Per replicate Spearman agreement with the reference; NaN when undefined.
    pub transformed: Vec<f64>,
    pub naive: Vec<f64>,
}

impl IntegrationResult {
    /// (25th percentile, median, 75th percentile) of the agreement.
    pub fn summary(values: &[f64]) -> (f64, f64, f64) {
        let q = quantiles(values, &[0.25, 0.5, 0.75]);
        (q[0], q[1], q[2])
    }
}

/// Calibration-loss experiment: split objects in half at random, multiply one
/// half's feature values by `scale`, and compare a raw merge against a merge
/// of independently transformed halves.
pub fn simulate_integration(
    table: &[OrdinalVector],
    decision: &Decision,
    scale: f64,
    reps: usize,
    seed: u64,
) -> Result<IntegrationResult> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(KendallError::InvalidArgument(format!("scale must be positive, got {scale}")));
    }
    let n = decision.len();
    if n < 4 {
        return Err(KendallError::TooFewObjects(n));
    }
    let reference = rank_features(table, decision, Method::Kendall)?;
    let features: Vec<String> = table.iter().map(|c| c.name.clone()).collect();
    let reference_scores = reference.scores_for(&features).expect("all features ranked");
    let decision_columns = decision.kendall_columns()?;

    let per_rep = (0..reps)
        .into_par_iter()
        .map(|rep| -> Result<(Vec<f64>, Vec<f64>)> {
            let mut rng = replicate_rng(seed, rep);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let (first, second) = order.split_at(n / 2);

            // naive: scale the second half in place, transform the fused table
            let perturbed: Vec<OrdinalVector> = table
                .iter()
                .map(|col| {
                    let mut c = col.clone();
                    for &i in second {
                        c.values[i] = c.values[i].map(|v| v * scale);
                    }
                    c
                })
                .collect();
            let naive = rank_features(&perturbed, decision, Method::Kendall)?
                .scores_for(&features)
                .expect("all features ranked");

            let map = BatchMap::new(vec![first.len(), second.len()])?;
            let merge = |col: &OrdinalVector, scaled: bool| -> Result<_> {
                let a = kendall_transform(&col.select(first))?;
                let mut b = col.select(second);
                if scaled {
                    b = b.map(|v| v * scale);
                }
                merge_transformed(&[a, kendall_transform(&b)?], &map)
            };
            let seqs = table.iter().map(|c| merge(c, true)).collect::<Result<Vec<_>>>()?;
            let targets = decision_columns
                .iter()
                .map(|c| merge(c, false))
                .collect::<Result<Vec<_>>>()?;
            let transformed = rank_sequences(&features, &seqs, targets)?
                .scores_for(&features)
                .expect("all features ranked");
            Ok((transformed, naive))
        })
        .collect::<Result<Vec<_>>>()?;

    let agreement = |s: &[f64]| spearman(&reference_scores, s).unwrap_or(f64::NAN);
    let (transformed_scores, naive_scores): (Vec<_>, Vec<_>) = per_rep.into_iter().unzip();
    Ok(IntegrationResult {
        transformed: transformed_scores.iter().map(|s| agreement(s)).collect(),
        naive: naive_scores.iter().map(|s| agreement(s)).collect(),
        features,
        reference_scores,
        transformed_scores,
        naive_scores,
    })
}

/// Synthetic stand-in for a small biomedical table: positive, skewed features
/// with heterogeneous dispersion, driven with decreasing strength by a latent
/// numeric decision.
///
/// Feature `j` is `exp(s_j * (r_j * d + sqrt(1 - r_j^2) * e_j))` with
/// `d, e_j ~ N(0, 1)`, `r_j` falling linearly from 0.9 to 0 and `s_j`
/// log-uniform on `[0.1, 2]`.
pub fn synthetic_table(n_objects: usize, n_features: usize, seed: u64) -> (Vec<OrdinalVector>, Decision) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d: Vec<f64> = (0..n_objects).map(|_| rng.sample(StandardNormal)).collect();
    let table = (0..n_features)
        .map(|j| {
            let r = if n_features > 1 {
                0.9 * (1.0 - j as f64 / (n_features - 1) as f64)
            } else {
                0.9
            };
            let s = rng.random_range(0.1f64.ln()..2.0f64.ln()).exp();
            let noise = (1.0 - r * r).sqrt();
            let values: Vec<f64> = d
                .iter()
                .map(|&di| {
                    let e: f64 = rng.sample(StandardNormal);
                    (s * (r * di + noise * e)).exp()
                })
                .collect();
            OrdinalVector::new(format!("f{j:02}"), values)
        })
        .collect();
    (table, Decision::Numeric(OrdinalVector::new("decision", d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn bivariate_shape_and_determinism() {
        let a = simulate_bivariate(0.5, 30, 8, 11).unwrap();
        let b = simulate_bivariate(0.5, 30, 8, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.estimators, BIVARIATE_ESTIMATORS);
        assert_eq!(a.reps(), 8);
        let c = simulate_bivariate(0.5, 30, 8, 12).unwrap();
        assert_ne!(a, c);
        let p = a.percentiles("kendall").unwrap();
        assert!(p.windows(2).all(|w| w[0] <= w[1]));
        assert!(a.get("knn").is_none());
    }

    #[test]
    fn bivariate_preconditions() {
        assert!(simulate_bivariate(1.0, 30, 2, 0).is_err());
        assert!(simulate_bivariate(0.0, 4, 2, 0).is_err());
    }

    #[test]
    fn single_driver_saturates() {
        let s = simulate_multivariate(1.0, Mixture::Linear, 50, 3).unwrap();
        assert!((s.mi_a - LN_2).abs() < 1e-12);
        let s = simulate_multivariate(0.0, Mixture::Max, 50, 3).unwrap();
        assert!((s.mi_b - LN_2).abs() < 1e-12);
    }

    #[test]
    fn multivariate_reps_start_with_single_run() {
        let reps = simulate_multivariate_reps(0.3, Mixture::Max, 40, 3, 5).unwrap();
        assert_eq!(reps[0], simulate_multivariate(0.3, Mixture::Max, 40, 5).unwrap());
        assert!(simulate_multivariate(1.5, Mixture::Linear, 40, 0).is_err());
        assert!(simulate_multivariate(0.5, Mixture::Linear, 10, 0).is_err());
    }

    #[test]
    fn integration_identity_scale() {
        let (table, decision) = synthetic_table(24, 6, 2);
        let r = simulate_integration(&table, &decision, 1.0, 4, 9).unwrap();
        // scale 1 leaves the naive merge equal to the reference
        for s in &r.naive {
            assert!((s - 1.0).abs() < 1e-12);
        }
        let other = simulate_integration(&table, &decision, 3.0, 4, 9).unwrap();
        assert_eq!(r.transformed_scores, other.transformed_scores);
    }

    #[test]
    fn integration_with_categorical_decision() {
        let (table, _) = synthetic_table(20, 3, 4);
        let classes = ["a", "b", "c", "a", "b"];
        let decision = Decision::Categorical((0..20).map(|i| Some(classes[i % 5].to_string())).collect());
        let r = simulate_integration(&table, &decision, 3.0, 2, 1).unwrap();
        assert_eq!(r.transformed.len(), 2);
    }
}
