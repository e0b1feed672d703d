use serde::{Deserialize, Serialize};

use super::{is_constant, moments};
use crate::error::{Error, Result};
use crate::linalg::{dot, solve, Matrix};

/// `y ~ slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearModel {
    #[inline]
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn predict_all(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.predict(v)).collect()
    }
}

/// Closed-form least squares line. Returns the model and its training MSE.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(LinearModel, f64)> {
    let m = moments(x, y)?;
    if is_constant(m.sxx, x) {
        return Err(Error::ZeroVariance);
    }
    let slope = m.sxy / m.sxx;
    let model = LinearModel {
        slope,
        intercept: m.mean_y - slope * m.mean_x,
    };
    let train_mse = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (b - model.predict(a)).powi(2))
        .sum::<f64>()
        / x.len() as f64;
    Ok((model, train_mse))
}

/// `y ~ beta . x + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultilinearModel {
    pub beta: Vec<f64>,
    pub intercept: f64,
}

impl MultilinearModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        dot(&self.beta, x) + self.intercept
    }

    pub fn predict_rows(&self, x: &Matrix) -> Vec<f64> {
        x.iter_rows().map(|r| self.predict(r)).collect()
    }
}

/// Least squares with an intercept, via the normal equations.
///
/// Columns are centered (which absorbs the intercept) and scaled to unit norm
/// before forming `Z^T Z`; the solution is mapped back afterwards.
pub fn multilinear_fit(x: &Matrix, y: &[f64]) -> Result<MultilinearModel> {
    let (n, m) = (x.rows(), x.cols());
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.len() });
    }
    if n < m + 1 {
        return Err(Error::InsufficientData { needed: m + 1, got: n });
    }
    let inv_n = 1.0 / n as f64;
    let col_mean: Vec<f64> = (0..m)
        .map(|c| x.iter_rows().map(|r| r[c]).sum::<f64>() * inv_n)
        .collect();
    let y_mean = y.iter().sum::<f64>() * inv_n;

    let mut z = Matrix::zeros(n, m);
    for (r, row) in x.iter_rows().enumerate() {
        for c in 0..m {
            z.set(r, c, row[c] - col_mean[c]);
        }
    }
    let mut col_scale = vec![0.0; m];
    for (c, scale) in col_scale.iter_mut().enumerate() {
        let norm = z.iter_rows().map(|r| r[c] * r[c]).sum::<f64>().sqrt();
        let column: Vec<f64> = x.iter_rows().map(|r| r[c]).collect();
        if is_constant(norm * norm, &column) {
            return Err(Error::Singular { condition: f64::INFINITY });
        }
        *scale = norm;
    }
    for r in 0..n {
        for (c, &s) in col_scale.iter().enumerate() {
            let v = z.get(r, c) / s;
            z.set(r, c, v);
        }
    }

    let mut gram = Matrix::zeros(m, m);
    let mut rhs = vec![0.0; m];
    for (row, &target) in z.iter_rows().zip(y) {
        let centered = target - y_mean;
        for a in 0..m {
            rhs[a] += row[a] * centered;
            for b in a..m {
                let v = gram.get(a, b) + row[a] * row[b];
                gram.set(a, b, v);
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            gram.set(a, b, gram.get(b, a));
        }
    }

    let scaled = solve(&gram, &rhs)?;
    let beta: Vec<f64> = scaled.iter().zip(&col_scale).map(|(b, s)| b / s).collect();
    let intercept = y_mean - dot(&beta, &col_mean);
    if beta.iter().any(|b| !b.is_finite()) || !intercept.is_finite() {
        return Err(Error::Singular { condition: f64::INFINITY });
    }
    Ok(MultilinearModel { beta, intercept })
}
