//! Discretisation baselines, feature ranking and agreement metrics, and the
//! seeded simulation experiments built on them.

mod binning;
mod ranking;
mod simulate;
mod stats;

pub use binning::{bin_equal_frequency, bin_equal_width};
pub use ranking::{jaccard_max, rank_features, rank_transformed, Decision, FeatureRanking, Method};
pub use simulate::{
    simulate_bivariate, simulate_integration, simulate_multivariate, simulate_multivariate_reps,
    synthetic_table, IntegrationResult, Mixture, MultivariateScores, SimResult, BIVARIATE_ESTIMATORS,
    PERCENTILES,
};
pub use stats::{pearson, quantile_sorted, quantiles, spearman, spearman_rho};
