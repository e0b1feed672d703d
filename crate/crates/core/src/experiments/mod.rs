//! Experiment runner: input/target matrix, seeded splits, baselines and error tables.

mod distill;
mod model;
mod sweep;
mod tables;

pub use distill::{distill_formula, distill_values, formula_inputs, formula_mape, FormulaFit, SearchStep, B_MAX, B_MIN};
pub use model::{evaluate_model, train_model, Evaluation, FeatureWindow, TrainedModel};
pub use sweep::{export_scatter, phase_sweep, scatter_csv, PhaseScore, ScatterSummary};
pub use tables::{
    run_correlation_table, run_error_tables, CorrelationCell, CorrelationTable, ErrorTables, TableCell, TableConfig,
    TableRow,
};

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ann::{self, Activation, NetworkSpec, TrainConfig};
use crate::error::{Error, Result};
use crate::invariants::{DerivedInvariantKind, DEFAULT_MAHLER_POINTS, DEFAULT_ZETA};
use crate::knot_data::{filter_class, vectorize_jones, vectorize_khovanov, Dataset, KnotClass, KnotRecord};
use crate::linalg::Matrix;
use crate::stats::{linear_fit, mean, pearson, MetricReport};

pub const RESULT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputInvariant {
    RescaledDet,
    RescaledMahler,
    RescaledZetaEval,
    JonesVector,
    KhovanovVector,
}

impl InputInvariant {
    pub const SCALARS: [InputInvariant; 3] = [
        InputInvariant::RescaledDet,
        InputInvariant::RescaledMahler,
        InputInvariant::RescaledZetaEval,
    ];

    pub fn is_scalar(self) -> bool {
        !matches!(self, InputInvariant::JonesVector | InputInvariant::KhovanovVector)
    }

    pub fn derived_kind(self) -> Option<DerivedInvariantKind> {
        match self {
            InputInvariant::RescaledDet => Some(DerivedInvariantKind::Determinant),
            InputInvariant::RescaledMahler => Some(DerivedInvariantKind::MahlerMeasure {
                n_points: DEFAULT_MAHLER_POINTS,
            }),
            InputInvariant::RescaledZetaEval => Some(DerivedInvariantKind::RootOfUnityEval {
                k: DEFAULT_ZETA.k,
                n: DEFAULT_ZETA.n,
            }),
            _ => None,
        }
    }

    /// Rescaled scalar value; `Config` error for vector inputs.
    pub fn scalar_value(self, rec: &KnotRecord) -> Result<f64> {
        let kind = self
            .derived_kind()
            .ok_or_else(|| Error::Config(format!("{self} is not a scalar input")))?;
        kind.rescaled(&rec.jones)
    }

    pub fn label(self) -> &'static str {
        match self {
            InputInvariant::RescaledDet => "det",
            InputInvariant::RescaledMahler => "mahler",
            InputInvariant::RescaledZetaEval => "zeta",
            InputInvariant::JonesVector => "jones",
            InputInvariant::KhovanovVector => "khovanov",
        }
    }
}

impl fmt::Display for InputInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InputInvariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            InputInvariant::RescaledDet,
            InputInvariant::RescaledMahler,
            InputInvariant::RescaledZetaEval,
            InputInvariant::JonesVector,
            InputInvariant::KhovanovVector,
        ]
        .into_iter()
        .find(|i| i.label() == s)
        .ok_or_else(|| Error::Config(format!("unknown input {s:?}; expected det, mahler, zeta, jones or khovanov")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetInvariant {
    Vol,
    LongitudeLength,
    MeridianLength,
    MuX,
    MuY,
    CuspVolume,
    ChernSimons,
}

impl TargetInvariant {
    pub const ALL: [TargetInvariant; 7] = [
        TargetInvariant::Vol,
        TargetInvariant::LongitudeLength,
        TargetInvariant::MeridianLength,
        TargetInvariant::MuX,
        TargetInvariant::MuY,
        TargetInvariant::CuspVolume,
        TargetInvariant::ChernSimons,
    ];

    pub fn value(self, rec: &KnotRecord) -> Option<f64> {
        let h = &rec.hyperbolic;
        match self {
            TargetInvariant::Vol => h.vol,
            TargetInvariant::LongitudeLength => h.longitude_length,
            TargetInvariant::MeridianLength => h.meridian_length,
            TargetInvariant::MuX => h.mu_x,
            TargetInvariant::MuY => h.mu_y,
            TargetInvariant::CuspVolume => h.cusp_volume,
            TargetInvariant::ChernSimons => h.chern_simons,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TargetInvariant::Vol => "vol",
            TargetInvariant::LongitudeLength => "longitude",
            TargetInvariant::MeridianLength => "meridian",
            TargetInvariant::MuX => "mu_x",
            TargetInvariant::MuY => "mu_y",
            TargetInvariant::CuspVolume => "cusp_volume",
            TargetInvariant::ChernSimons => "chern_simons",
        }
    }
}

impl fmt::Display for TargetInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TargetInvariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TargetInvariant::ALL
            .into_iter()
            .find(|t| t.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown target {s:?}")))
    }
}

/// ANN architecture without the input width, which comes from the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnConfig {
    pub hidden: Vec<usize>,
    pub activation: Activation,
    pub train: TrainConfig,
}

impl Default for AnnConfig {
    fn default() -> Self {
        AnnConfig {
            hidden: vec![100, 100],
            activation: Activation::Relu,
            train: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    LinearRegression,
    Ann(AnnConfig),
    BaselineMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub input: InputInvariant,
    pub target: TargetInvariant,
    pub class: KnotClass,
    pub model: ModelKind,
    pub split_fraction: f64,
    pub split_seed: u64,
}

impl ExperimentConfig {
    pub fn new(input: InputInvariant, target: TargetInvariant, class: KnotClass, model: ModelKind) -> Self {
        ExperimentConfig {
            input,
            target,
            class,
            model,
            split_fraction: 0.8,
            split_seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.model, self.input.is_scalar()) {
            (ModelKind::LinearRegression, false) => {
                Err(Error::Config(format!("linear regression needs a scalar input, got {}", self.input)))
            }
            (ModelKind::Ann(_), true) => Err(Error::Config(format!("the network needs a vector input, got {}", self.input))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultCell {
    /// Percent; absent when a test target is zero.
    pub mape: Option<f64>,
    pub mse: f64,
    /// Absent when the baseline MSE is zero.
    pub relative_mse: Option<f64>,
    /// Correlation of test predictions with test targets.
    pub pearson: Option<f64>,
    pub n_train: usize,
    pub n_test: usize,
    pub bold_mape: bool,
    pub bold_mse: bool,
    pub baseline: MetricReport,
    pub dropped_missing_target: usize,
    pub dropped_invalid_input: usize,
    pub config: ExperimentConfig,
}

/// `error < 0.5 * baseline`.
pub fn is_bold(error: f64, baseline: f64) -> bool {
    error < 0.5 * baseline
}

/// Seeded shuffle of `0..n`; the first `ceil(fraction * n)` go to train.
pub fn split_indices(n: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!("split fraction must lie in (0, 1), got {fraction}")));
    }
    let n_train = (fraction * n as f64).ceil() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = idx.split_off(n_train);
    Ok((idx, test))
}

pub fn split(ds: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(ds.len(), fraction, seed)?;
    Ok((ds.select(&train), ds.select(&test)))
}

/// Constant predictor returning the training mean.
pub fn baseline_mean(train_targets: &[f64]) -> Result<f64> {
    mean(train_targets)
}

/// Independent seed for cell `index` of a table run with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(seed ^ splitmix(index))
}

/// Features and targets after dropping unusable records.
struct Prepared {
    x: Matrix,
    y: Vec<f64>,
    dropped_missing_target: usize,
    dropped_invalid_input: usize,
}

fn prepare(ds: &Dataset, input: InputInvariant, target: TargetInvariant, class: KnotClass) -> Result<Prepared> {
    let filtered = filter_class(ds, class);
    let with_target = filtered.retain_cloned(|r| target.value(r).is_some());
    let dropped_missing_target = filtered.len() - with_target.len();
    let (x, kept, dropped_invalid_input) = match input {
        InputInvariant::JonesVector => {
            let (x, _) = vectorize_jones(&with_target)?;
            (x, with_target, 0)
        }
        InputInvariant::KhovanovVector => {
            let kept = with_target.retain_cloned(|r| r.khovanov.as_ref().is_some_and(|k| !k.is_empty()));
            let dropped = with_target.len() - kept.len();
            let (x, _) = vectorize_khovanov(&kept)?;
            (x, kept, dropped)
        }
        scalar => {
            let mut values = Vec::with_capacity(with_target.len());
            let mut keep = Vec::with_capacity(with_target.len());
            for (i, rec) in with_target.iter().enumerate() {
                if let Ok(v) = scalar.scalar_value(rec) {
                    values.push(v);
                    keep.push(i);
                }
            }
            let dropped = with_target.len() - keep.len();
            (Matrix::column(&values), with_target.select(&keep), dropped)
        }
    };
    if kept.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let y = kept.iter().map(|r| target.value(r).expect("filtered above")).collect();
    Ok(Prepared {
        x,
        y,
        dropped_missing_target,
        dropped_invalid_input,
    })
}

/// Fits the configured model on a seeded split and scores it on the held-out part.
pub fn run_experiment(ds: &Dataset, cfg: &ExperimentConfig) -> Result<ResultCell> {
    cfg.validate()?;
    let p = prepare(ds, cfg.input, cfg.target, cfg.class)?;
    let (train_idx, test_idx) = split_indices(p.y.len(), cfg.split_fraction, cfg.split_seed)?;
    let x_train = p.x.select_rows(&train_idx);
    let x_test = p.x.select_rows(&test_idx);
    let y_train: Vec<f64> = train_idx.iter().map(|&i| p.y[i]).collect();
    let y_test: Vec<f64> = test_idx.iter().map(|&i| p.y[i]).collect();

    let base = baseline_mean(&y_train)?;
    let baseline = MetricReport::compute(&vec![base; y_test.len()], &y_test)?;

    let pred = match &cfg.model {
        ModelKind::BaselineMean => vec![base; y_test.len()],
        ModelKind::LinearRegression => {
            let col: Vec<f64> = x_train.iter_rows().map(|r| r[0]).collect();
            let (line, _) = linear_fit(&col, &y_train)?;
            x_test.iter_rows().map(|r| line.predict(r[0])).collect()
        }
        ModelKind::Ann(ann_cfg) => {
            let spec = NetworkSpec::with_hidden(p.x.cols(), &ann_cfg.hidden, ann_cfg.activation)?;
            let out = ann::train(&spec, &x_train, &y_train, &ann_cfg.train)?;
            out.network.predict_rows(&x_test)?
        }
    };
    let report = MetricReport::compute(&pred, &y_test)?;
    let relative_mse = (baseline.mse > 0.0).then(|| report.mse / baseline.mse);
    let bold_mape = matches!((report.mape, baseline.mape), (Some(m), Some(b)) if is_bold(m, b));
    let bold_mse = is_bold(report.mse, baseline.mse);
    Ok(ResultCell {
        mape: report.mape,
        mse: report.mse,
        relative_mse,
        pearson: pearson(&pred, &y_test).ok(),
        n_train: y_train.len(),
        n_test: y_test.len(),
        bold_mape,
        bold_mse,
        baseline,
        dropped_missing_target: p.dropped_missing_target,
        dropped_invalid_input: p.dropped_invalid_input,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot_data::HyperbolicInvariants;
    use crate::poly::LaurentPoly1;

    /// `t^-m + ... + t^m` with alternating signs has determinant `2m + 1`.
    pub(crate) fn alternating_jones(m: i64) -> LaurentPoly1 {
        let coeffs: Vec<i64> = (0..=2 * m).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        LaurentPoly1::new(-m, coeffs).unwrap()
    }

    pub(crate) fn synthetic(n: usize, vol: impl Fn(&KnotRecord) -> f64) -> Dataset {
        let records = (0..n)
            .map(|i| {
                let mut rec = KnotRecord {
                    name: format!("k{i}"),
                    crossing_number: 3 + (i % 10) as u32,
                    alternating: i % 3 != 0,
                    jones: alternating_jones(1 + (i % 7) as i64),
                    khovanov: None,
                    hyperbolic: HyperbolicInvariants::default(),
                };
                rec.hyperbolic.vol = Some(vol(&rec));
                rec.hyperbolic.mu_x = Some(if i % 4 == 0 { 0.0 } else { i as f64 * 0.01 });
                rec
            })
            .collect();
        Dataset::new(records, "synthetic").unwrap()
    }

    #[test]
    fn split_sizes_and_determinism() {
        let (a, b) = split_indices(10, 0.8, 3).unwrap();
        assert_eq!((a.len(), b.len()), (8, 2));
        assert_eq!(split_indices(10, 0.8, 3).unwrap(), (a.clone(), b.clone()));
        let mut all: Vec<usize> = a.into_iter().chain(b).collect();
        all.sort();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert!(split_indices(10, 1.0, 0).is_err());
        assert!(split_indices(1, 0.5, 0).is_err());
        // ceil(0.81 * 10) = 9
        assert_eq!(split_indices(10, 0.81, 0).unwrap().0.len(), 9);
    }

    #[test]
    fn baseline_cases() {
        assert_eq!(baseline_mean(&[2.0, 4.0]).unwrap(), 3.0);
        assert_eq!(baseline_mean(&[5.5]).unwrap(), 5.5);
        assert!(baseline_mean(&[]).is_err());
    }

    #[test]
    fn bold_boundary() {
        assert!(is_bold(0.49, 1.0));
        assert!(!is_bold(0.5, 1.0));
        assert!(!is_bold(0.51, 1.0));
    }

    #[test]
    fn baseline_model_is_its_own_reference() {
        let ds = synthetic(60, |r| 1.0 + r.crossing_number as f64);
        let cfg = ExperimentConfig::new(
            InputInvariant::RescaledDet,
            TargetInvariant::Vol,
            KnotClass::All,
            ModelKind::BaselineMean,
        );
        let cell = run_experiment(&ds, &cfg).unwrap();
        assert_eq!(cell.relative_mse, Some(1.0));
        assert!(!cell.bold_mse && !cell.bold_mape);
        assert_eq!(cell.n_train + cell.n_test, 60);
    }

    #[test]
    fn planted_linear_target_is_recovered() {
        let kind = InputInvariant::RescaledDet;
        let ds = synthetic(70, |r| 2.0 * kind.scalar_value(r).unwrap() + 1.0);
        let cfg = ExperimentConfig::new(kind, TargetInvariant::Vol, KnotClass::All, ModelKind::LinearRegression);
        let cell = run_experiment(&ds, &cfg).unwrap();
        assert!(cell.mse < 1e-20);
        assert!(cell.bold_mse && cell.bold_mape);
        assert_eq!(run_experiment(&ds, &cfg).unwrap(), cell);
    }

    #[test]
    fn zero_targets_drop_mape_only() {
        let ds = synthetic(80, |r| r.crossing_number as f64);
        let cfg = ExperimentConfig::new(
            InputInvariant::RescaledZetaEval,
            TargetInvariant::MuX,
            KnotClass::All,
            ModelKind::LinearRegression,
        );
        let cell = run_experiment(&ds, &cfg).unwrap();
        assert!(cell.mape.is_none());
        assert!(cell.mse.is_finite());
    }

    #[test]
    fn missing_targets_are_counted() {
        let ds = synthetic(30, |r| r.crossing_number as f64);
        let cfg = ExperimentConfig::new(
            InputInvariant::RescaledDet,
            TargetInvariant::CuspVolume,
            KnotClass::All,
            ModelKind::LinearRegression,
        );
        assert!(matches!(run_experiment(&ds, &cfg), Err(Error::EmptyDataset)));
        let mismatched = ExperimentConfig::new(
            InputInvariant::JonesVector,
            TargetInvariant::Vol,
            KnotClass::All,
            ModelKind::LinearRegression,
        );
        assert!(matches!(run_experiment(&ds, &mismatched), Err(Error::Config(_))));
    }

    #[test]
    fn seeds_are_spread() {
        let seeds: std::collections::BTreeSet<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 100);
        assert_eq!(derive_seed(42, 7), derive_seed(42, 7));
    }
}
