// Straight-line and multilinear fits of volume, then a two-cluster piecewise fit.

use knotstat::experiments::{InputInvariant, TargetInvariant};
use knotstat::knot_data::load_dataset;
use knotstat::linalg::Matrix;
use knotstat::stats::{linear_fit, multilinear_fit, pearson, two_cluster_fit};

pub fn run_example() -> knotstat::Result<()> {
    let ds = load_dataset(knotstat::cli::DEFAULT_DATA)?;
    let mut rows = Vec::new();
    let mut vol = Vec::new();
    for rec in &ds {
        let Some(v) = TargetInvariant::Vol.value(rec) else { continue };
        let features: knotstat::Result<Vec<f64>> = InputInvariant::SCALARS.iter().map(|i| i.scalar_value(rec)).collect();
        rows.push(features?);
        vol.push(v);
    }
    let zeta: Vec<f64> = rows.iter().map(|r| r[2]).collect();

    let (line, fit_mse) = linear_fit(&zeta, &vol)?;
    println!(
        "vol ~ {:.3} * zeta + {:.3}  (mse {fit_mse:.4}, r {:.3})",
        line.slope,
        line.intercept,
        pearson(&zeta, &vol)?
    );

    let x = Matrix::from_rows(&rows)?;
    let multi = multilinear_fit(&x, &vol)?;
    println!("vol ~ {:?} . (det, mahler, zeta) + {:.3}", multi.beta, multi.intercept);

    let det: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let clusters = two_cluster_fit(&det, &vol, 7)?;
    for (i, m) in clusters.models.iter().enumerate() {
        println!(
            "cluster {i}: {} knots, slope {:.3}, intercept {:.3}, r {:.3}",
            clusters.sizes[i], m.slope, m.intercept, clusters.pearson[i]
        );
    }
    Ok(())
}

fn main() -> knotstat::Result<()> {
    run_example()
}
