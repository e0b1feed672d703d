// Write the points behind a scatter plot of an invariant against a target.

use knotstat::experiments::{export_scatter, scatter_csv, InputInvariant, TargetInvariant};
use knotstat::knot_data::{load_dataset, KnotClass};

pub fn run_example() -> knotstat::Result<()> {
    let ds = load_dataset(knotstat::cli::DEFAULT_DATA)?;
    let (text, summary) = scatter_csv(&ds, InputInvariant::RescaledDet, TargetInvariant::Vol, KnotClass::Alternating)?;
    print!("{text}");
    println!("slope {:.3}, r {:.3}", summary.line.slope, summary.pearson);

    let path = std::env::temp_dir().join("knotstat_scatter_nonalt.csv");
    export_scatter(&ds, InputInvariant::RescaledDet, TargetInvariant::Vol, KnotClass::NonAlternating, &path)?;
    println!("wrote {}", path.display());
    let _ = std::fs::remove_file(path);
    Ok(())
}

fn main() -> knotstat::Result<()> {
    run_example()
}
