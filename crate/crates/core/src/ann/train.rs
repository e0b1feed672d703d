use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{init_network, Gradients, Network, NetworkSpec, Standardization, Workspace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::stats::MetricReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub momentum: f64,
    pub seed: u64,
    pub input_standardize: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            batch_size: 32,
            epochs: 400,
            momentum: 0.9,
            seed: 42,
            input_standardize: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning rate must be positive, got {}", self.learning_rate)));
        }
        if self.batch_size == 0 || self.epochs == 0 {
            return Err(Error::Config("batch size and epochs must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!("momentum must lie in [0, 1), got {}", self.momentum)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub network: Network,
    /// Full training-set MSE after each epoch.
    pub loss_history: Vec<f64>,
}

/// Mini-batch gradient descent with momentum, reshuffling every epoch.
pub fn train(spec: &NetworkSpec, x: &Matrix, y: &[f64], cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let mut net = init_network(spec, cfg.seed)?;
    net.check_batch(x, y)?;
    if x.rows() < cfg.batch_size {
        return Err(Error::InsufficientData {
            needed: cfg.batch_size,
            got: x.rows(),
        });
    }
    let inputs = if cfg.input_standardize {
        let s = Standardization::fit(x);
        let z = s.apply(x);
        net.standardization = Some(s);
        z
    } else {
        x.clone()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let mut order: Vec<usize> = (0..inputs.rows()).collect();
    let mut ws = Workspace::new(spec);
    let mut grads = Gradients::zeros_like(&net);
    let mut velocity = Gradients::zeros_like(&net);
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size) {
            net.backprop_ws(&inputs, y, batch, &mut ws, &mut grads);
            let layers = net.weights.iter_mut().zip(net.biases.iter_mut());
            let steps = velocity.weights.iter_mut().zip(velocity.biases.iter_mut());
            let gs = grads.weights.iter().zip(&grads.biases);
            for ((w, b), ((vw, vb), (gw, gb))) in layers.zip(steps.zip(gs)) {
                let params = w.as_mut_slice().iter_mut().chain(b.iter_mut());
                let vel = vw.as_mut_slice().iter_mut().chain(vb.iter_mut());
                let g = gw.as_slice().iter().chain(gb.iter());
                for ((p, v), g) in params.zip(vel).zip(g) {
                    *v = cfg.momentum * *v - cfg.learning_rate * g;
                    *p += *v;
                }
            }
        }
        let loss = net.loss_ws(&inputs, y, &mut ws);
        if !loss.is_finite() {
            return Err(Error::Divergence { epoch, loss });
        }
        history.push(loss);
    }
    Ok(TrainOutcome {
        network: net,
        loss_history: history,
    })
}

/// Test-set errors, with the stored input standardization applied.
pub fn evaluate(net: &Network, x: &Matrix, y: &[f64]) -> Result<MetricReport> {
    net.check_batch(x, y)?;
    MetricReport::compute(&net.predict_rows(x)?, y)
}
