//! Two-line fit through data that splits into two clusters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{linear_fit, pearson, sample_stats, LinearModel};
use crate::error::{Error, Result};

const MAX_LLOYD_ITERATIONS: usize = 100;
const RESTARTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoClusterFit {
    /// Ordered by ascending centroid x.
    pub models: [LinearModel; 2],
    pub pearson: [f64; 2],
    /// Cluster index (0 or 1) of every input point.
    pub assignment: Vec<usize>,
    pub sizes: [usize; 2],
    pub iterations: usize,
}

/// Standardizes both coordinates, runs seeded 2-means (best of ten k-means++
/// starts, Lloyd iterations), then fits a line and a correlation inside each cluster.
pub fn two_cluster_fit(x: &[f64], y: &[f64], seed: u64) -> Result<TwoClusterFit> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: x.len(),
        });
    }
    let sx = sample_stats(x)?;
    let sy = sample_stats(y)?;
    let scale = |v: f64, s: &super::SampleStats| if s.std > 0.0 { (v - s.mean) / s.std } else { 0.0 };
    let points: Vec<[f64; 2]> = x.iter().zip(y).map(|(&a, &b)| [scale(a, &sx), scale(b, &sy)]).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>, [[f64; 2]; 2], usize)> = None;
    for _ in 0..RESTARTS {
        let (assignment, centroids, iterations) = lloyd(&points, plus_plus_init(&points, &mut rng));
        let inertia: f64 = points.iter().zip(&assignment).map(|(p, &a)| dist2(p, &centroids[a])).sum();
        if best.as_ref().is_none_or(|b| inertia < b.0) {
            best = Some((inertia, assignment, centroids, iterations));
        }
    }
    let (_, mut assignment, centroids, iterations) = best.expect("at least one restart");

    // relabel so that cluster 0 has the smaller centroid x
    let swap = (centroids[1][0], centroids[1][1]) < (centroids[0][0], centroids[0][1]);
    if swap {
        assignment.iter_mut().for_each(|a| *a = 1 - *a);
    }

    let mut sizes = [0; 2];
    assignment.iter().for_each(|&a| sizes[a] += 1);
    if let Some(k) = (0..2).find(|&k| sizes[k] < 2) {
        return Err(Error::DegenerateCluster { cluster: k, size: sizes[k] });
    }

    let mut models = [LinearModel { slope: 0.0, intercept: 0.0 }; 2];
    let mut correlations = [0.0; 2];
    for k in 0..2 {
        let (cx, cy): (Vec<f64>, Vec<f64>) = x
            .iter()
            .zip(y)
            .zip(&assignment)
            .filter(|(_, &a)| a == k)
            .map(|((&a, &b), _)| (a, b))
            .unzip();
        models[k] = linear_fit(&cx, &cy)?.0;
        correlations[k] = pearson(&cx, &cy)?;
    }
    Ok(TwoClusterFit {
        models,
        pearson: correlations,
        assignment,
        sizes,
        iterations,
    })
}

fn lloyd(points: &[[f64; 2]], mut centroids: [[f64; 2]; 2]) -> (Vec<usize>, [[f64; 2]; 2], usize) {
    let mut assignment = vec![usize::MAX; points.len()];
    let mut iterations = 0;
    while iterations < MAX_LLOYD_ITERATIONS {
        iterations += 1;
        let mut changed = false;
        for (p, a) in points.iter().zip(assignment.iter_mut()) {
            let nearest = usize::from(dist2(p, &centroids[1]) < dist2(p, &centroids[0]));
            if *a != nearest {
                *a = nearest;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (k, centroid) in centroids.iter_mut().enumerate() {
            let (mut sx, mut sy, mut count) = (0.0, 0.0, 0usize);
            for (p, _) in points.iter().zip(&assignment).filter(|(_, &a)| a == k) {
                sx += p[0];
                sy += p[1];
                count += 1;
            }
            if count > 0 {
                *centroid = [sx / count as f64, sy / count as f64];
            }
        }
    }
    (assignment, centroids, iterations)
}

fn dist2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn plus_plus_init(points: &[[f64; 2]], rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    let first = points[rng.random_range(0..points.len())];
    let weights: Vec<f64> = points.iter().map(|p| dist2(p, &first)).collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return [first, first];
    }
    let mut target = rng.random::<f64>() * total;
    let mut second = points[points.len() - 1];
    for (p, w) in points.iter().zip(&weights) {
        if target < *w {
            second = *p;
            break;
        }
        target -= w;
    }
    [first, second]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_lines() -> (Vec<f64>, Vec<f64>, Vec<usize>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut truth = Vec::new();
        for i in 0..50 {
            let t = i as f64 / 49.0;
            x.push(t);
            y.push(t);
            truth.push(0);
            x.push(t);
            y.push(t + 10.0);
            truth.push(1);
        }
        (x, y, truth)
    }

    #[test]
    fn separates_parallel_lines() {
        let (x, y, truth) = two_lines();
        let fit = two_cluster_fit(&x, &y, 7).unwrap();
        // both centroids have x = 0.5, so ordering falls back to centroid y
        assert_eq!(fit.assignment, truth);
        for k in 0..2 {
            assert!((fit.pearson[k] - 1.0).abs() < 1e-9);
            assert!((fit.models[k].slope - 1.0).abs() < 1e-9);
        }
        assert!((fit.models[1].intercept - 10.0).abs() < 1e-9);
    }

    #[test]
    fn single_line_splits_into_identical_fits() {
        let x: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let (global, _) = linear_fit(&x, &y).unwrap();
        let fit = two_cluster_fit(&x, &y, 1).unwrap();
        for m in fit.models {
            assert!((m.slope - global.slope).abs() < 1e-9);
            assert!((m.intercept - global.intercept).abs() < 1e-9);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let x: Vec<f64> = (0..30).map(|i| ((i * 37) % 11) as f64).collect();
        let y: Vec<f64> = (0..30).map(|i| ((i * 17) % 13) as f64).collect();
        let a = two_cluster_fit(&x, &y, 99).unwrap();
        let b = two_cluster_fit(&x, &y, 99).unwrap();
        assert_eq!(a.assignment, b.assignment);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(two_cluster_fit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 0).is_err());
        // all points identical: one cluster stays empty
        let same = [1.0; 6];
        assert!(matches!(
            two_cluster_fit(&same, &same, 0),
            Err(Error::DegenerateCluster { .. })
        ));
    }
}
