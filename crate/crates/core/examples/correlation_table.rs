// Pearson correlation of the rescaled scalar invariants with every hyperbolic target.

use knotstat::experiments::{run_correlation_table, InputInvariant, TargetInvariant};
use knotstat::knot_data::{load_dataset, KnotClass};

pub fn run_example() -> knotstat::Result<()> {
    run(knotstat::cli::DEFAULT_DATA)
}

fn run(path: &str) -> knotstat::Result<()> {
    let ds = load_dataset(path)?;
    let table = run_correlation_table(&ds)?;
    print!("{}", table.render_text());

    let cell = table
        .get(InputInvariant::RescaledZetaEval, TargetInvariant::Vol, KnotClass::All)
        .expect("every scalar/target/class cell is present");
    println!("zeta vs vol over {} knots: {:?}", cell.n, cell.r);
    Ok(())
}

fn main() -> knotstat::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| knotstat::cli::DEFAULT_DATA.into());
    run(&path)
}
