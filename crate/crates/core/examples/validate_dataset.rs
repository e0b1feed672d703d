// Load a knot table, report class counts, and cross-check Khovanov data against Jones.
//
// ```text
// cargo run --example validate_dataset -- path/to/knots.csv
// ```

use knotstat::knot_data::{check_khovanov_alternating, load_dataset, Dataset};

pub fn run_example() -> knotstat::Result<()> {
    let ds = load_dataset(knotstat::cli::DEFAULT_DATA)?;
    report(&ds)
}

fn report(ds: &Dataset) -> knotstat::Result<()> {
    let counts = ds.class_counts();
    println!("{}: {} knots", ds.provenance(), ds.len());
    println!("  alternating {}, non-alternating {}", counts.alternating, counts.non_alternating);
    println!("  max crossings {:?}", ds.max_crossings());

    let mut mismatched = Vec::new();
    for rec in ds.iter().filter(|r| r.khovanov.is_some()) {
        if !check_khovanov_alternating(rec)? {
            mismatched.push(rec.name.as_str());
        }
    }
    println!("  khovanov/jones mismatches: {mismatched:?}");

    // the CSV writer and reader agree on every field
    let again = knotstat::knot_data::parse_csv_str(&ds.to_csv_string(), "round trip")?;
    assert_eq!(again.records(), ds.records());
    Ok(())
}

fn main() -> knotstat::Result<()> {
    match std::env::args().nth(1) {
        Some(path) => report(&load_dataset(path)?),
        None => run_example(),
    }
}
