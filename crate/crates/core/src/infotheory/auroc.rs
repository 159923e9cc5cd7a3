use crate::error::{KendallError, Result};
use crate::ranks::fractional_ranks;
use crate::transform::OrdinalVector;

/// Area under the ROC curve with the Mann-Whitney statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Auroc {
    /// Fraction of (positive, negative) pairs with the positive scored higher.
    pub auc: f64,
    /// Positives.
    pub a: u64,
    /// Negatives.
    pub b: u64,
    /// `U = ab(1 - A)`.
    pub u: f64,
}

/// AUROC of score `x` for labels `y` (`true` = positive class).
///
/// Uses rank sums; a cross-class tie in `x` counts one half. Objects with a
/// missing score are skipped.
pub fn auroc(x: &OrdinalVector, y: &[bool]) -> Result<Auroc> {
    if x.len() != y.len() {
        return Err(KendallError::length_mismatch_in(x.len(), y.len(), "auroc"));
    }
    let (scores, labels): (Vec<f64>, Vec<bool>) = x
        .values
        .iter()
        .zip(y)
        .filter_map(|(v, &l)| v.map(|v| (v, l)))
        .unzip();
    let a = labels.iter().filter(|&&l| l).count() as u64;
    let b = labels.len() as u64 - a;
    if a == 0 || b == 0 {
        return Err(KendallError::Degenerate(format!(
            "labels must contain both classes, got {a} positives and {b} negatives"
        )));
    }
    let ranks = fractional_ranks(&scores);
    let rank_sum: f64 = ranks.iter().zip(&labels).filter(|p| *p.1).map(|p| *p.0).sum();
    let wins = rank_sum - (a * (a + 1)) as f64 / 2.0;
    let ab = (a * b) as f64;
    let auc = wins / ab;
    Ok(Auroc {
        auc,
        a,
        b,
        u: ab - wins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(v: &[f64]) -> OrdinalVector {
        OrdinalVector::new("x", v.iter().copied())
    }

    #[test]
    fn separated_classes() {
        let r = auroc(&ov(&[1.0, 2.0, 3.0, 4.0]), &[false, false, true, true]).unwrap();
        assert_eq!((r.auc, r.a, r.b, r.u), (1.0, 2, 2, 0.0));
    }

    #[test]
    fn one_swap() {
        let r = auroc(&ov(&[1.0, 3.0, 2.0, 4.0]), &[false, false, true, true]).unwrap();
        assert_eq!(r.auc, 0.75);
        assert_eq!(r.u, 1.0);
    }

    #[test]
    fn label_swap_complements() {
        let x = ov(&[0.3, 1.2, -0.5, 2.2, 0.9]);
        let y = [true, false, false, true, false];
        let flipped: Vec<bool> = y.iter().map(|l| !l).collect();
        let r = auroc(&x, &y).unwrap();
        let s = auroc(&x, &flipped).unwrap();
        assert!((r.auc + s.auc - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cross_class_tie_counts_half() {
        let r = auroc(&ov(&[1.0, 1.0]), &[true, false]).unwrap();
        assert_eq!(r.auc, 0.5);
    }

    #[test]
    fn single_class_is_an_error() {
        assert!(matches!(auroc(&ov(&[1.0, 2.0]), &[true, true]), Err(KendallError::Degenerate(_))));
    }
}
