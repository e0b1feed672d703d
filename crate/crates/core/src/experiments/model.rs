use serde::{Deserialize, Serialize};

use super::{baseline_mean, split_indices, AnnConfig, InputInvariant, TargetInvariant};
use crate::ann::{self, Network, NetworkSpec};
use crate::error::{Error, Result};
use crate::knot_data::{filter_class, vectorize_jones, vectorize_khovanov, Dataset, JonesWindow, KhovanovGrid, KnotClass};
use crate::linalg::Matrix;
use crate::stats::MetricReport;

/// Coefficient layout a network was trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureWindow {
    Jones(JonesWindow),
    Khovanov(KhovanovGrid),
}

impl FeatureWindow {
    pub fn width(&self) -> usize {
        match self {
            FeatureWindow::Jones(w) => w.width(),
            FeatureWindow::Khovanov(g) => g.width(),
        }
    }

    /// Rows for every record with `target` that fits the window, plus the number skipped.
    pub fn features(&self, ds: &Dataset, target: TargetInvariant) -> (Matrix, Vec<f64>, usize) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for rec in ds {
            let Some(t) = target.value(rec) else { continue };
            let row = match self {
                FeatureWindow::Jones(w) => w.encode(&rec.jones),
                FeatureWindow::Khovanov(g) => rec.khovanov.as_ref().and_then(|k| g.encode(k)),
            };
            if let Some(row) = row {
                rows.push(row);
                y.push(t);
            }
        }
        let skipped = ds.len() - y.len();
        let x = if rows.is_empty() {
            Matrix::zeros(0, self.width())
        } else {
            Matrix::from_rows(&rows).expect("rows share the window width")
        };
        (x, y, skipped)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub input: InputInvariant,
    pub target: TargetInvariant,
    pub class: KnotClass,
    pub window: FeatureWindow,
    pub network: Network,
    pub loss_history: Vec<f64>,
    pub test: MetricReport,
    pub baseline: MetricReport,
    pub n_train: usize,
    pub n_test: usize,
}

/// Trains a network on the seeded training split and scores it on the rest.
pub fn train_model(
    ds: &Dataset,
    input: InputInvariant,
    target: TargetInvariant,
    class: KnotClass,
    ann_cfg: &AnnConfig,
    split_fraction: f64,
    split_seed: u64,
) -> Result<TrainedModel> {
    let sub = filter_class(ds, class).retain_cloned(|r| target.value(r).is_some());
    let window = match input {
        InputInvariant::JonesVector => FeatureWindow::Jones(vectorize_jones(&sub)?.1),
        InputInvariant::KhovanovVector => {
            let sub = sub.retain_cloned(|r| r.khovanov.as_ref().is_some_and(|k| !k.is_empty()));
            FeatureWindow::Khovanov(vectorize_khovanov(&sub)?.1)
        }
        other => return Err(Error::Config(format!("the network needs a vector input, got {other}"))),
    };
    let (x, y, _) = window.features(&sub, target);
    let (train_idx, test_idx) = split_indices(y.len(), split_fraction, split_seed)?;
    let pick = |idx: &[usize]| -> (Matrix, Vec<f64>) { (x.select_rows(idx), idx.iter().map(|&i| y[i]).collect()) };
    let (x_train, y_train) = pick(&train_idx);
    let (x_test, y_test) = pick(&test_idx);

    let spec = NetworkSpec::with_hidden(window.width(), &ann_cfg.hidden, ann_cfg.activation)?;
    let out = ann::train(&spec, &x_train, &y_train, &ann_cfg.train)?;
    let base = baseline_mean(&y_train)?;
    let baseline = MetricReport::compute(&vec![base; y_test.len()], &y_test)?;
    let test = ann::evaluate(&out.network, &x_test, &y_test)?;
    let test = if baseline.mse > 0.0 { test.relative_to(&baseline) } else { test };
    Ok(TrainedModel {
        input,
        target,
        class,
        window,
        network: out.network,
        loss_history: out.loss_history,
        test,
        baseline,
        n_train: y_train.len(),
        n_test: y_test.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub report: MetricReport,
    pub n: usize,
    /// Records without the target or outside the training window.
    pub skipped: usize,
}

/// Scores a trained model on every usable record of `ds`.
pub fn evaluate_model(model: &TrainedModel, ds: &Dataset) -> Result<Evaluation> {
    let sub = filter_class(ds, model.class);
    let (x, y, skipped) = model.window.features(&sub, model.target);
    if y.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(Evaluation {
        report: ann::evaluate(&model.network, &x, &y)?,
        n: y.len(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ann::TrainConfig;
    use crate::experiments::tests::synthetic;

    #[test]
    fn trained_model_round_trips_and_rescores() {
        let ds = synthetic(120, |r| 1.0 + 0.5 * r.jones.coeffs().len() as f64);
        let cfg = AnnConfig {
            hidden: vec![6],
            train: TrainConfig {
                epochs: 60,
                batch_size: 16,
                ..Default::default()
            },
            ..Default::default()
        };
        let model = train_model(
            &ds,
            InputInvariant::JonesVector,
            TargetInvariant::Vol,
            KnotClass::All,
            &cfg,
            0.8,
            1,
        )
        .unwrap();
        assert_eq!(model.n_train + model.n_test, 120);
        let text = serde_json::to_string(&model).unwrap();
        let back: TrainedModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, model);
        let eval = evaluate_model(&back, &ds).unwrap();
        assert_eq!((eval.n, eval.skipped), (120, 0));
        assert!(train_model(&ds, InputInvariant::RescaledDet, TargetInvariant::Vol, KnotClass::All, &cfg, 0.8, 1).is_err());
    }
}
