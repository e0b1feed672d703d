//! Sample statistics, correlation, least-squares fits and error metrics.
//!
//! Variance and covariance use the `n - 1` denominator throughout.

mod cluster;
mod regression;

pub use cluster::{two_cluster_fit, TwoClusterFit};
pub use regression::{linear_fit, multilinear_fit, LinearModel, MultilinearModel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub mean: f64,
    pub variance: f64,
    pub std: f64,
}

pub fn mean(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    Ok(x.iter().sum::<f64>() / x.len() as f64)
}

pub fn sample_stats(x: &[f64]) -> Result<SampleStats> {
    if x.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: x.len(),
        });
    }
    let m = mean(x)?;
    let variance = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64;
    Ok(SampleStats {
        mean: m,
        variance,
        std: variance.sqrt(),
    })
}

/// Centered sums `(sum dx^2, sum dy^2, sum dx dy)` and the means.
pub(crate) struct Moments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
}

pub(crate) fn moments(x: &[f64], y: &[f64]) -> Result<Moments> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: x.len(),
        });
    }
    let mean_x = mean(x)?;
    let mean_y = mean(y)?;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok(Moments {
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    })
}

/// True when the spread of `v` is indistinguishable from rounding noise on its mean.
pub(crate) fn is_constant(sum_sq_dev: f64, v: &[f64]) -> bool {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    sum_sq_dev <= v.len() as f64 * (1e-13 * scale).powi(2)
}

/// Pearson correlation coefficient, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let m = moments(x, y)?;
    if is_constant(m.sxx, x) || is_constant(m.syy, y) {
        return Err(Error::ZeroVariance);
    }
    Ok((m.sxy / (m.sxx.sqrt() * m.syy.sqrt())).clamp(-1.0, 1.0))
}

fn check_pair(pred: &[f64], y: &[f64]) -> Result<()> {
    if pred.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            got: pred.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    Ok(())
}

pub fn mse(pred: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(pred, y)?;
    Ok(pred.iter().zip(y).map(|(p, t)| (t - p).powi(2)).sum::<f64>() / y.len() as f64)
}

/// Mean absolute percentage error, in percent.
pub fn mape(pred: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(pred, y)?;
    if y.contains(&0.0) {
        return Err(Error::ZeroTarget);
    }
    Ok(100.0 * pred.iter().zip(y).map(|(p, t)| ((t - p) / t).abs()).sum::<f64>() / y.len() as f64)
}

/// Test-set errors of one model. `mape` is absent exactly when a target is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mse: f64,
    pub mape: Option<f64>,
    pub relative_mse: Option<f64>,
}

impl MetricReport {
    pub fn compute(pred: &[f64], y: &[f64]) -> Result<Self> {
        let mse = mse(pred, y)?;
        let mape = match mape(pred, y) {
            Ok(v) => Some(v),
            Err(Error::ZeroTarget) => None,
            Err(e) => return Err(e),
        };
        Ok(MetricReport {
            mse,
            mape,
            relative_mse: None,
        })
    }

    pub fn relative_to(mut self, baseline: &MetricReport) -> Self {
        self.relative_mse = Some(self.mse / baseline.mse);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_hand_case() {
        let s = sample_stats(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.variance, 1.0);
        assert_eq!(s.std, 1.0);
        assert_eq!(sample_stats(&[4.0, 4.0, 4.0]).unwrap().variance, 0.0);
        assert!(matches!(sample_stats(&[7.0]), Err(Error::InsufficientData { .. })));
        assert_eq!(mean(&[7.0]).unwrap(), 7.0);
    }

    #[test]
    fn pearson_cases() {
        let x = [1.0, 2.0, 3.0, 4.5, -2.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 7.0).collect();
        assert_eq!(pearson(&x, &y).unwrap(), 1.0);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson(&x, &neg).unwrap(), -1.0);
        // cov = (−1·−1 + 0·1 + 1·0)/2 = 0.5, both std 1
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::ZeroVariance)));
        assert!(matches!(pearson(&[0.1, 0.1, 0.1], &[1.0, 2.0, 3.0]), Err(Error::ZeroVariance)));
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn mse_and_mape_cases() {
        let y = [1.0, 3.0, -2.0];
        assert_eq!(mse(&y, &y).unwrap(), 0.0);
        let shifted: Vec<f64> = y.iter().map(|v| v + 1.0).collect();
        assert_eq!(mse(&shifted, &y).unwrap(), 1.0);
        assert_eq!(mse(&[0.0, 0.0], &[1.0, 3.0]).unwrap(), 5.0);

        assert_eq!(mape(&y, &y).unwrap(), 0.0);
        let scaled: Vec<f64> = y.iter().map(|v| 1.1 * v).collect();
        assert!((mape(&scaled, &y).unwrap() - 10.0).abs() < 1e-12);
        assert!(matches!(mape(&[1.0, 1.0], &[1.0, 0.0]), Err(Error::ZeroTarget)));
    }

    #[test]
    fn report_omits_mape_on_zero_targets() {
        let r = MetricReport::compute(&[0.5, 1.0], &[0.0, 1.0]).unwrap();
        assert!(r.mape.is_none());
        assert_eq!(r.mse, 0.125);
        let base = MetricReport::compute(&[1.0, 1.0], &[0.0, 1.0]).unwrap();
        assert_eq!(r.relative_to(&base).relative_mse, Some(0.25));
    }
}
