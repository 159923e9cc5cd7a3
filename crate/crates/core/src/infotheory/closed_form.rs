//! Closed-form mutual information of transformed variables.

use std::f64::consts::LN_2;

use crate::error::{KendallError, Result};

/// MI between the transforms of two tie-free variables with Kendall's `tau`:
/// `tau * ln sqrt((1+tau)/(1-tau)) + ln sqrt(1-tau^2)`.
///
/// Even in `tau`, increasing on `(0, 1]`, bounded by `ln 2` at `|tau| = 1`.
pub fn mi_from_tau(tau: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&tau) {
        return Err(KendallError::InvalidArgument(format!("tau must lie in [-1, 1], got {tau}")));
    }
    let t = tau.abs();
    if t == 1.0 {
        return Ok(LN_2);
    }
    // same expression regrouped: ((1+t) ln(1+t) + (1-t) ln(1-t)) / 2
    Ok(0.5 * ((1.0 + t) * t.ln_1p() + (1.0 - t) * (-t).ln_1p()))
}

/// Gaussian MI from a correlation coefficient, `-ln sqrt(1 - rho^2)`.
pub fn mi_from_rho(rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(KendallError::InvalidArgument(format!(
            "rho must lie in (-1, 1), got {rho}; the Gaussian MI diverges at |rho| = 1"
        )));
    }
    Ok(-0.5 * (1.0 - rho * rho).ln())
}

/// MI between the transforms of a tie-free score and a binary label, from the
/// AUROC `auc` and the class sizes `a` and `b`:
/// `2ab / (n(n-1)) * (A ln(A/(1-A)) + ln(2 - 2A))`.
pub fn mi_from_auroc(auc: f64, a: u64, b: u64) -> Result<f64> {
    if a == 0 || b == 0 {
        return Err(KendallError::Degenerate(format!(
            "both classes must be present, got sizes {a} and {b}"
        )));
    }
    if !(0.0..=1.0).contains(&auc) {
        return Err(KendallError::InvalidArgument(format!("AUROC must lie in [0, 1], got {auc}")));
    }
    let n = (a + b) as f64;
    let weight = 2.0 * a as f64 * b as f64 / (n * (n - 1.0));
    let bracket = if auc == 0.0 || auc == 1.0 {
        LN_2
    } else {
        auc * (auc / (1.0 - auc)).ln() + (2.0 - 2.0 * auc).ln()
    };
    Ok(weight * bracket)
}
