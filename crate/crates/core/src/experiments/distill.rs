//! Fitting `target ~ a * ln(|J(e^{i phase})| + b) - c`.

use serde::{Deserialize, Serialize};

use super::TargetInvariant;
use crate::error::{Error, Result};
use crate::invariants::phase_modulus;
use crate::knot_data::Dataset;
use crate::stats::{linear_fit, mape, mse, LinearModel};

pub const B_MIN: f64 = 1e-6;
pub const B_MAX: f64 = 100.0;
const GRID_POINTS: usize = 49;
const B_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Radians.
    pub phase: f64,
    /// Percent, over the whole dataset.
    pub mape: f64,
    pub mse: f64,
    pub n: usize,
    /// Best point after each search step; the objective never increases along it.
    #[serde(skip)]
    pub trajectory: Vec<SearchStep>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStep {
    pub b: f64,
    pub mse: f64,
}

impl FormulaFit {
    pub fn predict(&self, u: f64) -> f64 {
        self.a * (u + self.b).ln() - self.c
    }
}

fn profile(u: &[f64], y: &[f64], b: f64) -> Result<(LinearModel, f64)> {
    let logs: Vec<f64> = u.iter().map(|v| (v + b).ln()).collect();
    linear_fit(&logs, y)
}

/// `(|J(e^{i phase})|, target)` for every record that has the target.
pub fn formula_inputs(ds: &Dataset, phase: f64, target: TargetInvariant) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut u = Vec::with_capacity(ds.len());
    let mut y = Vec::with_capacity(ds.len());
    for rec in ds {
        if let Some(t) = target.value(rec) {
            u.push(phase_modulus(&rec.jones, phase)?);
            y.push(t);
        }
    }
    Ok((u, y))
}

/// MAPE of fixed constants on the same inputs [`distill_formula`] would use.
pub fn formula_mape(ds: &Dataset, phase: f64, target: TargetInvariant, a: f64, b: f64, c: f64) -> Result<f64> {
    let (u, y) = formula_inputs(ds, phase, target)?;
    let pred: Vec<f64> = u.iter().map(|v| a * (v + b).ln() - c).collect();
    mape(&pred, &y)
}

pub fn distill_formula(ds: &Dataset, phase: f64, target: TargetInvariant) -> Result<FormulaFit> {
    let (u, y) = formula_inputs(ds, phase, target)?;
    distill_values(&u, &y, phase)
}

/// Least-squares fit of `y ~ a ln(u + b) - c` with `b` in `[B_MIN, B_MAX]`.
///
/// For fixed `b` the problem is a line in `ln(u + b)`, so only `b` is searched:
/// a log-spaced grid brackets the minimum, golden-section search refines it.
pub fn distill_values(u: &[f64], y: &[f64], phase: f64) -> Result<FormulaFit> {
    if u.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            got: u.len(),
        });
    }
    if y.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: y.len() });
    }
    if let Some(&bad) = y.iter().find(|&&t| !(t > 0.0)) {
        return Err(Error::NonPositive(bad));
    }
    if let Some(&bad) = u.iter().find(|&&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::Config(format!("moduli must be finite and non-negative, got {bad}")));
    }

    let mut trajectory: Vec<SearchStep> = Vec::new();
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |b: f64, objective: f64, trajectory: &mut Vec<SearchStep>| {
        if best.is_none_or(|(_, m)| objective < m) {
            best = Some((b, objective));
        }
        let (b, mse) = best.expect("set above");
        trajectory.push(SearchStep { b, mse });
    };

    let ratio = (B_MAX / B_MIN).ln() / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| B_MIN * (ratio * i as f64).exp()).collect();
    let mut grid_best = 0;
    let mut grid_obj = f64::INFINITY;
    for (i, &b) in grid.iter().enumerate() {
        let obj = profile(u, y, b)?.1;
        if obj < grid_obj {
            grid_obj = obj;
            grid_best = i;
        }
        consider(b, obj, &mut trajectory);
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut lo = grid[grid_best.saturating_sub(1)];
    let mut hi = grid[(grid_best + 1).min(GRID_POINTS - 1)];
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = profile(u, y, x1)?.1;
    let mut f2 = profile(u, y, x2)?.1;
    consider(x1, f1, &mut trajectory);
    consider(x2, f2, &mut trajectory);
    while hi - lo > B_TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = profile(u, y, x1)?.1;
            consider(x1, f1, &mut trajectory);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = profile(u, y, x2)?.1;
            consider(x2, f2, &mut trajectory);
        }
    }

    let (b, _) = best.expect("grid is non-empty");
    let (line, fit_mse) = profile(u, y, b)?;
    let fit = FormulaFit {
        a: line.slope,
        b,
        c: -line.intercept,
        phase,
        mape: 0.0,
        mse: fit_mse,
        n: y.len(),
        trajectory,
    };
    let pred: Vec<f64> = u.iter().map(|&v| fit.predict(v)).collect();
    Ok(FormulaFit {
        mape: mape(&pred, y)?,
        mse: mse(&pred, y)?,
        ..fit
    })
}
