use crate::error::{KendallError, Result};
use crate::ranks::fractional_ranks;
use crate::transform::OrdinalVector;

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= sorted.len() || frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Type-7 quantiles of an unsorted sample. NaN entries are dropped.
pub fn quantiles(values: &[f64], ps: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    if sorted.is_empty() {
        return vec![f64::NAN; ps.len()];
    }
    sorted.sort_by(f64::total_cmp);
    ps.iter().map(|&p| quantile_sorted(&sorted, p)).collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(KendallError::length_mismatch_in(x.len(), y.len(), "pearson"));
    }
    if x.len() < 2 {
        return Err(KendallError::TooFewObjects(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(KendallError::Degenerate("correlation of a constant variable".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's rho of two plain samples: Pearson correlation of fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(KendallError::length_mismatch_in(x.len(), y.len(), "spearman"));
    }
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

/// Spearman's rho over pairwise-complete objects.
pub fn spearman_rho(x: &OrdinalVector, y: &OrdinalVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(KendallError::length_mismatch_in(x.len(), y.len(), "spearman_rho"));
    }
    let (a, b): (Vec<f64>, Vec<f64>) = x
        .values
        .iter()
        .zip(&y.values)
        .filter_map(|(p, q)| Some(((*p)?, (*q)?)))
        .unzip();
    spearman(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(v: &[f64]) -> OrdinalVector {
        OrdinalVector::new("v", v.iter().copied())
    }

    #[test]
    fn spearman_reference_values() {
        let x = ov(&[1.0, 2.0, 3.0]);
        assert!((spearman_rho(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman_rho(&x, &x.map(|v| -v)).unwrap() + 1.0).abs() < 1e-15);
        assert!((spearman_rho(&x, &ov(&[2.0, 1.0, 3.0])).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spearman_constant_is_an_error() {
        assert!(matches!(
            spearman_rho(&ov(&[1.0, 2.0, 3.0]), &ov(&[4.0, 4.0, 4.0])),
            Err(KendallError::Degenerate(_))
        ));
    }

    #[test]
    fn spearman_skips_missing() {
        let x = OrdinalVector::with_missing("x", vec![Some(1.0), None, Some(2.0), Some(3.0)]);
        let y = ov(&[1.0, 100.0, 2.0, 3.0]);
        assert!((spearman_rho(&x, &y).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn type7_quantiles() {
        let v: Vec<f64> = (1..=9).map(f64::from).collect();
        assert!((quantile_sorted(&v, 1.0 / 3.0) - 11.0 / 3.0).abs() < 1e-12);
        assert_eq!(quantile_sorted(&v, 0.5), 5.0);
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 1.0), 9.0);
        assert_eq!(quantiles(&[3.0, 1.0, 2.0, f64::NAN], &[0.5]), vec![2.0]);
    }
}
