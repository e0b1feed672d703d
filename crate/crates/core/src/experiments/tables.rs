use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    derive_seed, run_experiment, AnnConfig, ExperimentConfig, InputInvariant, ModelKind, ResultCell, TargetInvariant,
    RESULT_SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::knot_data::{Dataset, KnotClass};
use crate::stats::pearson;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCell {
    pub input: InputInvariant,
    pub target: TargetInvariant,
    pub class: KnotClass,
    /// Absent when undefined (constant column or fewer than two usable records).
    pub r: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub schema_version: u32,
    pub cells: Vec<CorrelationCell>,
}

/// Full-dataset Pearson correlation of every scalar input with every target, per class.
pub fn run_correlation_table(ds: &Dataset) -> Result<CorrelationTable> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let values: Vec<Vec<Option<f64>>> = InputInvariant::SCALARS
        .iter()
        .map(|input| ds.records().par_iter().map(|r| input.scalar_value(r).ok()).collect())
        .collect();
    let mut cells = Vec::new();
    for class in KnotClass::EVERY {
        for (input, xs) in InputInvariant::SCALARS.into_iter().zip(&values) {
            for target in TargetInvariant::ALL {
                let (x, y): (Vec<f64>, Vec<f64>) = ds
                    .iter()
                    .zip(xs)
                    .filter(|(r, _)| class.contains(r))
                    .filter_map(|(r, x)| Some(((*x)?, target.value(r)?)))
                    .unzip();
                cells.push(CorrelationCell {
                    input,
                    target,
                    class,
                    r: pearson(&x, &y).ok(),
                    n: x.len(),
                });
            }
        }
    }
    Ok(CorrelationTable {
        schema_version: RESULT_SCHEMA_VERSION,
        cells,
    })
}

impl CorrelationTable {
    pub fn get(&self, input: InputInvariant, target: TargetInvariant, class: KnotClass) -> Option<&CorrelationCell> {
        self.cells
            .iter()
            .find(|c| c.input == input && c.target == target && c.class == class)
    }

    /// One block per class, inputs as rows, targets as columns, two decimals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for class in KnotClass::EVERY {
            let _ = writeln!(out, "r for {}", class.label());
            let _ = write!(out, "{:<10}", "");
            for t in TargetInvariant::ALL {
                let _ = write!(out, "{:>14}", t.label());
            }
            out.push('\n');
            for input in InputInvariant::SCALARS {
                let _ = write!(out, "{:<10}", input.label());
                for t in TargetInvariant::ALL {
                    let text = match self.get(input, t, class).and_then(|c| c.r) {
                        Some(r) => format!("{r:.2}"),
                        None => "-".into(),
                    };
                    let _ = write!(out, "{text:>14}");
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", content = "input", rename_all = "snake_case")]
pub enum TableRow {
    Ann(InputInvariant),
    Linear(InputInvariant),
    Baseline,
}

impl TableRow {
    pub fn default_rows() -> Vec<TableRow> {
        vec![
            TableRow::Ann(InputInvariant::KhovanovVector),
            TableRow::Ann(InputInvariant::JonesVector),
            TableRow::Linear(InputInvariant::RescaledDet),
            TableRow::Linear(InputInvariant::RescaledMahler),
            TableRow::Linear(InputInvariant::RescaledZetaEval),
            TableRow::Baseline,
        ]
    }

    pub fn label(self) -> String {
        match self {
            TableRow::Ann(i) | TableRow::Linear(i) => i.label().to_string(),
            TableRow::Baseline => "base line".into(),
        }
    }

    fn group(self) -> u8 {
        match self {
            TableRow::Ann(_) => 0,
            TableRow::Linear(_) => 1,
            TableRow::Baseline => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TableConfig {
    pub classes: Vec<KnotClass>,
    pub targets: Vec<TargetInvariant>,
    pub rows: Vec<TableRow>,
    pub ann: AnnConfig,
    pub split_fraction: f64,
    pub split_seed: u64,
    /// Worker threads for independent cells; `None` reads `KNOTSTAT_THREADS`.
    pub threads: Option<usize>,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            classes: KnotClass::EVERY.to_vec(),
            targets: TargetInvariant::ALL.to_vec(),
            rows: TableRow::default_rows(),
            ann: AnnConfig::default(),
            split_fraction: 0.8,
            split_seed: 42,
            threads: None,
        }
    }
}

impl TableConfig {
    /// Configuration of cell number `index`; network seeds differ per cell.
    fn cell_config(&self, index: usize, row: TableRow, target: TargetInvariant, class: KnotClass) -> ExperimentConfig {
        let (input, model) = match row {
            TableRow::Ann(input) => {
                let mut ann = self.ann.clone();
                ann.train.seed = derive_seed(self.ann.train.seed, index as u64);
                (input, ModelKind::Ann(ann))
            }
            TableRow::Linear(input) => (input, ModelKind::LinearRegression),
            TableRow::Baseline => (InputInvariant::JonesVector, ModelKind::BaselineMean),
        };
        ExperimentConfig {
            input,
            target,
            class,
            model,
            split_fraction: self.split_fraction,
            split_seed: self.split_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub row: TableRow,
    pub target: TargetInvariant,
    pub class: KnotClass,
    pub result: Option<ResultCell>,
    /// Why the cell is empty, if it is.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTables {
    pub schema_version: u32,
    pub config: TableConfig,
    pub cells: Vec<TableCell>,
}

pub(crate) fn thread_count(configured: Option<usize>) -> usize {
    configured
        .or_else(|| std::env::var("KNOTSTAT_THREADS").ok()?.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs every (class, row, target) cell. A failing cell is recorded, not propagated.
pub fn run_error_tables(ds: &Dataset, cfg: &TableConfig) -> Result<ErrorTables> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut jobs = Vec::new();
    for &class in &cfg.classes {
        for &row in &cfg.rows {
            for &target in &cfg.targets {
                jobs.push((row, target, class));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cfg.threads))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let cells = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(index, &(row, target, class))| {
                let exp = cfg.cell_config(index, row, target, class);
                let (result, error) = match run_experiment(ds, &exp) {
                    Ok(cell) => (Some(cell), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                TableCell {
                    row,
                    target,
                    class,
                    result,
                    error,
                }
            })
            .collect()
    });
    Ok(ErrorTables {
        schema_version: RESULT_SCHEMA_VERSION,
        config: cfg.clone(),
        cells,
    })
}

impl ErrorTables {
    pub fn get(&self, row: TableRow, target: TargetInvariant, class: KnotClass) -> Option<&TableCell> {
        self.cells
            .iter()
            .find(|c| c.row == row && c.target == target && c.class == class)
    }

    /// MAPE in percent with one decimal; bold cells carry a leading `*`.
    pub fn render_mape(&self) -> String {
        self.render("MAPE (%)", |r| r.mape.map(|m| (format!("{m:.1}"), r.bold_mape)))
    }

    /// MSE relative to the base line, two decimals; bold cells carry a leading `*`.
    pub fn render_relative_mse(&self) -> String {
        self.render("relative MSE", |r| r.relative_mse.map(|m| (format!("{m:.2}"), r.bold_mse)))
    }

    fn render(&self, title: &str, value: impl Fn(&ResultCell) -> Option<(String, bool)>) -> String {
        let mut out = String::new();
        for &class in &self.config.classes {
            let _ = writeln!(out, "{title} for {}", class.label());
            let _ = write!(out, "{:<10}", "");
            for t in &self.config.targets {
                let _ = write!(out, "{:>14}", t.label());
            }
            out.push('\n');
            let mut last_group = None;
            for &row in &self.config.rows {
                if last_group.is_some_and(|g| g != row.group()) {
                    let _ = writeln!(out, "{}", "-".repeat(10 + 14 * self.config.targets.len()));
                }
                last_group = Some(row.group());
                let _ = write!(out, "{:<10}", row.label());
                for &t in &self.config.targets {
                    let text = match self.get(row, t, class).and_then(|c| c.result.as_ref()).and_then(&value) {
                        Some((v, true)) => format!("*{v}"),
                        Some((v, false)) => v,
                        None => "-".into(),
                    };
                    let _ = write!(out, "{text:>14}");
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}
