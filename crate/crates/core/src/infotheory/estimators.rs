//! Maximum-likelihood (plug-in) entropy and mutual information.
//!
//! All quantities are in nats and restricted to positions where every
//! involved sequence is present.

use crate::categorical::Categorical;
use crate::error::{KendallError, Result};

use super::contingency::ContingencyTable;

fn table(xs: &[&dyn Categorical]) -> Result<ContingencyTable> {
    let t = ContingencyTable::new(xs)?;
    if t.total() == 0 {
        return Err(KendallError::NoCompletePositions);
    }
    Ok(t)
}

pub fn entropy(x: &dyn Categorical) -> Result<f64> {
    Ok(table(&[x])?.entropy())
}

/// Entropy of the joint distribution of several sequences.
pub fn joint_entropy(xs: &[&dyn Categorical]) -> Result<f64> {
    Ok(table(xs)?.entropy())
}

/// `I(X;Y) = H(X) + H(Y) - H(X,Y)`.
pub fn mutual_information(x: &dyn Categorical, y: &dyn Categorical) -> Result<f64> {
    let t = table(&[x, y])?;
    let mi = t.marginal_entropy(&[0]) + t.marginal_entropy(&[1]) - t.entropy();
    Ok(mi.max(0.0))
}

/// `I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(X,Y,Z) - H(Z)`.
pub fn conditional_mi(x: &dyn Categorical, y: &dyn Categorical, z: &dyn Categorical) -> Result<f64> {
    let t = table(&[x, y, z])?;
    let cmi = t.marginal_entropy(&[0, 2]) + t.marginal_entropy(&[1, 2])
        - t.entropy()
        - t.marginal_entropy(&[2]);
    Ok(cmi.max(0.0))
}

/// Three-way interaction information `I(X;Y;Z) = I(X;Y) - I(X;Y|Z)`.
///
/// Negative values signal synergy. Both terms use the positions where all
/// three sequences are present.
pub fn interaction_information(
    x: &dyn Categorical,
    y: &dyn Categorical,
    z: &dyn Categorical,
) -> Result<f64> {
    let t = table(&[x, y, z])?;
    let h = |axes: &[usize]| t.marginal_entropy(axes);
    Ok(h(&[0]) + h(&[1]) + h(&[2]) - h(&[0, 1]) - h(&[0, 2]) - h(&[1, 2]) + t.entropy())
}
