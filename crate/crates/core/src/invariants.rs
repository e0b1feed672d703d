//! Scalar invariants derived from a Jones polynomial, and their logarithmic rescaling.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::LaurentPoly1;

/// Quadrature nodes used for the Mahler measure unless configured otherwise.
pub const DEFAULT_MAHLER_POINTS: usize = 4096;

/// Default root of unity exponent `k/n` for the evaluation invariant.
pub const DEFAULT_ZETA: RootOfUnity = RootOfUnity { k: 3, n: 5 };

const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub k: i64,
    pub n: i64,
}

impl RootOfUnity {
    pub fn new(k: i64, n: i64) -> Result<Self> {
        if n <= 0 || k <= 0 || k >= n {
            return Err(Error::InvalidRootOfUnity { k, n });
        }
        Ok(RootOfUnity { k, n })
    }

    pub fn angle(&self) -> f64 {
        2.0 * PI * self.k as f64 / self.n as f64
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle())
    }
}

impl std::fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.k, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivedInvariantKind {
    Determinant,
    MahlerMeasure { n_points: usize },
    RootOfUnityEval { k: i64, n: i64 },
}

impl DerivedInvariantKind {
    /// Raw (unscaled) value of the invariant.
    pub fn value(&self, p: &LaurentPoly1) -> Result<f64> {
        match *self {
            DerivedInvariantKind::Determinant => determinant(p).map(|d| d as f64),
            DerivedInvariantKind::MahlerMeasure { n_points } => mahler_measure(p, n_points),
            DerivedInvariantKind::RootOfUnityEval { k, n } => root_of_unity_modulus(p, k, n),
        }
    }

    /// `ln(value) / ln(deg J)`.
    pub fn rescaled(&self, p: &LaurentPoly1) -> Result<f64> {
        rescale(self.value(p)?, degree(p))
    }
}

pub fn eval_poly(p: &LaurentPoly1, z: Complex64) -> Result<Complex64> {
    p.eval(z)
}

/// `|J(-1)|` rounded to the nearest integer.
pub fn determinant(p: &LaurentPoly1) -> Result<u64> {
    // at t = -1 every power is +-1, so this is exact in integers
    let v: i64 = p
        .terms()
        .map(|(e, c)| if e.rem_euclid(2) == 0 { c } else { -c })
        .sum();
    if v == 0 {
        return Err(Error::ZeroDeterminant);
    }
    Ok(v.unsigned_abs())
}

/// Mahler measure `exp(mean of ln|p(e^{i theta})|)` by the midpoint rule on
/// `n_points` nodes `theta_j = 2 pi (j + 1/2) / n_points`.
///
/// Moduli below `1e-300` are clamped before the logarithm.
pub fn mahler_measure(p: &LaurentPoly1, n_points: usize) -> Result<f64> {
    if n_points < 64 {
        return Err(Error::Config(format!("mahler_measure needs at least 64 nodes, got {n_points}")));
    }
    // |t^k p| = |p| on the unit circle, so the shift is dropped and the
    // ordinary polynomial evaluated directly.
    let coeffs: Vec<f64> = p.coeffs().iter().map(|&c| c as f64).collect();
    let step = 2.0 * PI / n_points as f64;
    let sum: f64 = (0..n_points)
        .map(|j| {
            let z = Complex64::from_polar(1.0, step * (j as f64 + 0.5));
            let v = coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
            v.norm().max(LOG_FLOOR).ln()
        })
        .sum();
    Ok((sum / n_points as f64).exp())
}

/// Doubles the node count from [`DEFAULT_MAHLER_POINTS`] until two successive
/// estimates differ by less than `1e-9`, up to `max_points`. Returns the last
/// estimate and the node count used.
pub fn mahler_measure_converged(p: &LaurentPoly1, max_points: usize) -> Result<(f64, usize)> {
    let mut n = DEFAULT_MAHLER_POINTS;
    let mut prev = mahler_measure(p, n)?;
    while n * 2 <= max_points {
        n *= 2;
        let next = mahler_measure(p, n)?;
        if (next - prev).abs() < 1e-9 {
            return Ok((next, n));
        }
        prev = next;
    }
    Ok((prev, n))
}

/// Jensen's formula: `|leading| * prod max(1, |root|)`.
pub fn mahler_jensen_oracle(roots: &[Complex64], leading: Complex64) -> f64 {
    roots
        .iter()
        .fold(leading.norm(), |acc, r| acc * r.norm().max(1.0))
}

/// `|J(e^{2 pi i k / n})|`.
pub fn root_of_unity_modulus(p: &LaurentPoly1, k: i64, n: i64) -> Result<f64> {
    let zeta = RootOfUnity::new(k, n)?;
    Ok(p.eval(zeta.point())?.norm())
}

/// `|J(e^{i phase})|` for an arbitrary phase in radians.
pub fn phase_modulus(p: &LaurentPoly1, phase: f64) -> Result<f64> {
    Ok(p.eval(Complex64::from_polar(1.0, phase))?.norm())
}

pub fn rescale(value: f64, jones_degree: usize) -> Result<f64> {
    if !(value > 0.0) {
        return Err(Error::NonPositive(value));
    }
    if jones_degree < 2 {
        return Err(Error::DegenerateDegree(jones_degree));
    }
    Ok(value.ln() / (jones_degree as f64).ln())
}

pub fn degree(p: &LaurentPoly1) -> usize {
    p.degree()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_eight() -> LaurentPoly1 {
        LaurentPoly1::new(-2, vec![1, -1, 1, -1, 1]).unwrap()
    }

    /// Brute-force evaluation from explicit powers of zeta, independent of Horner.
    fn brute_modulus(p: &LaurentPoly1, k: i64, n: i64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (e, c) in p.terms() {
            let ang = 2.0 * PI * (k * e) as f64 / n as f64;
            re += c as f64 * ang.cos();
            im += c as f64 * ang.sin();
        }
        (re * re + im * im).sqrt()
    }

    #[test]
    fn determinant_cases() {
        assert_eq!(determinant(&figure_eight()).unwrap(), 5);
        assert_eq!(determinant(&LaurentPoly1::monomial(0, 1).unwrap()).unwrap(), 1);
        // t + t^2 + t^3 at -1 is -1
        let p = LaurentPoly1::new(1, vec![1, 1, 1]).unwrap();
        assert_eq!(determinant(&p).unwrap(), 1);
        let q = LaurentPoly1::new(1, vec![3]).unwrap();
        assert_eq!(determinant(&q).unwrap(), 3);
        let zero = LaurentPoly1::new(0, vec![1, 1]).unwrap();
        assert!(matches!(determinant(&zero), Err(Error::ZeroDeterminant)));
    }

    #[test]
    fn determinant_of_minus_three() {
        // -1 + t - t^2 at -1 is -3
        let p = LaurentPoly1::new(0, vec![-1, 1, -1]).unwrap();
        assert_eq!(p.eval(Complex64::new(-1.0, 0.0)).unwrap().re, -3.0);
        assert_eq!(determinant(&p).unwrap(), 3);
    }

    #[test]
    fn mahler_simple_cases() {
        for k in [-5, 0, 3] {
            let p = LaurentPoly1::monomial(k, 1).unwrap();
            assert!((mahler_measure(&p, DEFAULT_MAHLER_POINTS).unwrap() - 1.0).abs() < 1e-12);
        }
        let p = LaurentPoly1::monomial(1, 2).unwrap();
        assert!((mahler_measure(&p, DEFAULT_MAHLER_POINTS).unwrap() - 2.0).abs() < 1e-12);

        let t_minus_2 = LaurentPoly1::new(0, vec![-2, 1]).unwrap();
        let oracle = mahler_jensen_oracle(&[Complex64::new(2.0, 0.0)], Complex64::new(1.0, 0.0));
        assert_eq!(oracle, 2.0);
        let m = mahler_measure(&t_minus_2, DEFAULT_MAHLER_POINTS).unwrap();
        assert!((m - oracle).abs() < 1e-8, "{m}");
        assert!(mahler_measure(&t_minus_2, 32).is_err());
    }

    #[test]
    fn jensen_oracle_cases() {
        assert_eq!(mahler_jensen_oracle(&[], Complex64::new(3.0, 0.0)), 3.0);
        assert_eq!(mahler_jensen_oracle(&[Complex64::new(0.0, 1.0)], Complex64::new(1.0, 0.0)), 1.0);
        assert_eq!(
            mahler_jensen_oracle(&[Complex64::new(-2.0, 0.0), Complex64::new(0.5, 0.0)], Complex64::new(-1.5, 0.0)),
            3.0
        );
    }

    #[test]
    fn mahler_converged_on_root_free_circle() {
        let p = LaurentPoly1::new(0, vec![-2, 1]).unwrap();
        let (m, n) = mahler_measure_converged(&p, 1 << 16).unwrap();
        assert!((m - 2.0).abs() < 1e-9);
        assert_eq!(n, 2 * DEFAULT_MAHLER_POINTS);
    }

    #[test]
    fn root_of_unity_cases() {
        let fe = figure_eight();
        assert!((root_of_unity_modulus(&fe, 1, 2).unwrap() - 5.0).abs() < 1e-12);
        let m = LaurentPoly1::monomial(7, 1).unwrap();
        assert!((root_of_unity_modulus(&m, 2, 9).unwrap() - 1.0).abs() < 1e-12);

        // Frozen from brute_modulus: |J(e^{6 pi i / 5})| for the figure-eight knot.
        // zeta^2 + zeta^-2 = 2cos(12pi/5) = 2cos(2pi/5), zeta + zeta^-1 = 2cos(6pi/5),
        // so J = 1 + 2cos(2pi/5) - 2cos(6pi/5) = 1 + 0.618034 + 1.618034 = 3.236068 (= 1 + sqrt 5).
        let expected = 1.0 + 5f64.sqrt();
        assert!((brute_modulus(&fe, 3, 5) - expected).abs() < 1e-12);
        assert!((root_of_unity_modulus(&fe, 3, 5).unwrap() - expected).abs() < 1e-12);
        assert!(root_of_unity_modulus(&fe, 0, 5).is_err());
        assert!(root_of_unity_modulus(&fe, 5, 5).is_err());
    }

    #[test]
    fn rescale_cases() {
        let v = rescale(5.0, 4).unwrap();
        assert!((v - 1.160964047443681).abs() < 1e-12);
        assert_eq!(rescale(1.0, 7).unwrap(), 0.0);
        assert!((rescale(4.0, 2).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(rescale(0.0, 4), Err(Error::NonPositive(_))));
        assert!(matches!(rescale(-1.0, 4), Err(Error::NonPositive(_))));
        assert!(matches!(rescale(5.0, 1), Err(Error::DegenerateDegree(1))));
    }

    #[test]
    fn degree_cases() {
        assert_eq!(degree(&figure_eight()), 4);
        assert_eq!(degree(&LaurentPoly1::monomial(-3, 2).unwrap()), 0);
        assert_eq!(degree(&LaurentPoly1::new(0, vec![1, 0, 0, 0, 0, 0, 1]).unwrap()), 6);
    }

    #[test]
    fn kinds_dispatch() {
        let fe = figure_eight();
        let det = DerivedInvariantKind::Determinant.rescaled(&fe).unwrap();
        assert!((det - 5f64.ln() / 4f64.ln()).abs() < 1e-12);
        let z = DerivedInvariantKind::RootOfUnityEval { k: 1, n: 2 }.value(&fe).unwrap();
        assert!((z - 5.0).abs() < 1e-12);
    }
}
