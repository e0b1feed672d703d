// Prediction error tables: networks, linear fits on the scalar invariants, and the
// mean base line, per class and target.

use knotstat::ann::TrainConfig;
use knotstat::experiments::{run_error_tables, AnnConfig, TableConfig, TargetInvariant};
use knotstat::knot_data::{load_dataset, KnotClass};

pub fn run_example() -> knotstat::Result<()> {
    let ds = load_dataset(knotstat::cli::DEFAULT_DATA)?;
    let cfg = TableConfig {
        classes: vec![KnotClass::All],
        targets: vec![TargetInvariant::Vol, TargetInvariant::MuX, TargetInvariant::CuspVolume],
        ann: AnnConfig {
            hidden: vec![5],
            train: TrainConfig {
                batch_size: 4,
                epochs: 100,
                ..TrainConfig::default()
            },
            ..AnnConfig::default()
        },
        threads: Some(1),
        ..TableConfig::default()
    };
    let tables = run_error_tables(&ds, &cfg)?;
    print!("{}", tables.render_mape());
    print!("{}", tables.render_relative_mse());
    for cell in tables.cells.iter().filter(|c| c.error.is_some()) {
        println!("{} / {}: {}", cell.row.label(), cell.target.label(), cell.error.as_deref().unwrap_or(""));
    }
    Ok(())
}

fn main() -> knotstat::Result<()> {
    run_example()
}
