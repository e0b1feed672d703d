// Rank roots of unity `e^{2 pi i k/n}` by how well `|J|` there correlates with volume.

use knotstat::cli::default_phases;
use knotstat::experiments::phase_sweep;
use knotstat::knot_data::load_dataset;

pub fn run_example() -> knotstat::Result<()> {
    run(knotstat::cli::DEFAULT_DATA)
}

fn run(path: &str) -> knotstat::Result<()> {
    let ds = load_dataset(path)?;
    let scores = phase_sweep(&ds, &default_phases(8))?;
    for s in scores.iter().take(8) {
        match s.pearson {
            Some(r) => println!("{:>2}/{:<2} r = {r:.4}  ({} knots)", s.k, s.n, s.n_used),
            None => println!("{:>2}/{:<2} undefined ({} dropped)", s.k, s.n, s.dropped),
        }
    }
    Ok(())
}

fn main() -> knotstat::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| knotstat::cli::DEFAULT_DATA.into());
    run(&path)
}
