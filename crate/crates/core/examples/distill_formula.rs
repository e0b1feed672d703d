// Fit `vol ~ a ln(|J(e^{3 pi i / 4})| + b) - c` and compare it with fixed constants.

use std::f64::consts::PI;

use knotstat::cli::PUBLISHED_FORMULA;
use knotstat::experiments::{distill_formula, formula_mape, TargetInvariant};
use knotstat::knot_data::load_dataset;

pub fn run_example() -> knotstat::Result<()> {
    run(knotstat::cli::DEFAULT_DATA)
}

fn run(path: &str) -> knotstat::Result<()> {
    let ds = load_dataset(path)?;
    let phase = 3.0 * PI / 4.0;
    let fit = distill_formula(&ds, phase, TargetInvariant::Vol)?;
    println!(
        "fitted: {:.3} ln(|J| + {:.3}) - {:.3}, mape {:.2}% over {} knots",
        fit.a, fit.b, fit.c, fit.mape, fit.n
    );
    let (a, b, c) = PUBLISHED_FORMULA;
    let fixed = formula_mape(&ds, phase, TargetInvariant::Vol, a, b, c)?;
    println!("constants ({a}, {b}, {c}): mape {fixed:.2}%");
    Ok(())
}

fn main() -> knotstat::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| knotstat::cli::DEFAULT_DATA.into());
    run(&path)
}
