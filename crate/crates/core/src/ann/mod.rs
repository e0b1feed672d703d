//! Fully connected feed-forward networks with a scalar output.
//!
//! A network with `p` hidden layers and sizes `(k_0, ..., k_{p+1})`, `k_{p+1} = 1`,
//! computes
//!
//! ```text
//! f = phi_p . (psi . phi_{p-1}) . ... . (psi . phi_0),    phi_t(x) = W_t x + b_t
//! ```
//!
//! with the activation `psi` applied componentwise after every affine map
//! except the last one.

mod gradcheck;
mod train;

pub use gradcheck::grad_check;
pub use train::{evaluate, train, TrainConfig, TrainOutcome};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const NETWORK_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Tanh,
    Logistic,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
            Activation::Logistic => 1.0 / (1.0 + (-z).exp()),
        }
    }

    /// Derivative at `z`. The ReLU derivative at exactly 0 is taken to be 0.
    #[inline]
    pub fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
            Activation::Logistic => {
                let s = 1.0 / (1.0 + (-z).exp());
                s * (1.0 - s)
            }
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Relu => "relu",
            Activation::Tanh => "tanh",
            Activation::Logistic => "logistic",
        })
    }
}

impl FromStr for Activation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "relu" => Ok(Activation::Relu),
            "tanh" => Ok(Activation::Tanh),
            "logistic" | "sigmoid" => Ok(Activation::Logistic),
            other => Err(Error::Config(format!("unknown activation {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub layer_sizes: Vec<usize>,
    pub activation: Activation,
}

impl NetworkSpec {
    pub fn new(layer_sizes: Vec<usize>, activation: Activation) -> Result<Self> {
        let spec = NetworkSpec {
            layer_sizes,
            activation,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Input width, hidden widths, then a single output.
    pub fn with_hidden(input: usize, hidden: &[usize], activation: Activation) -> Result<Self> {
        let mut sizes = Vec::with_capacity(hidden.len() + 2);
        sizes.push(input);
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        Self::new(sizes, activation)
    }

    pub fn validate(&self) -> Result<()> {
        if self.layer_sizes.len() < 2 {
            return Err(Error::Config("a network needs at least input and output sizes".into()));
        }
        if self.layer_sizes.contains(&0) {
            return Err(Error::Config("layer sizes must be positive".into()));
        }
        if *self.layer_sizes.last().expect("len >= 2") != 1 {
            return Err(Error::Config("the output layer must have size 1".into()));
        }
        Ok(())
    }

    pub fn input_width(&self) -> usize {
        self.layer_sizes[0]
    }

    /// Number of affine maps, `p + 1`.
    pub fn n_layers(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    pub fn hidden_layers(&self) -> usize {
        self.layer_sizes.len() - 2
    }
}

/// `(n_weights, n_biases)` = `(sum k_t k_{t+1}, sum k_{t+1})`.
pub fn param_count(spec: &NetworkSpec) -> (usize, usize) {
    spec.layer_sizes.windows(2).fold((0, 0), |(w, b), pair| (w + pair[0] * pair[1], b + pair[1]))
}

/// Per-column affine input transform `(x - mean) / std` fitted on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardization {
    /// Columns with zero spread get a unit divisor.
    pub fn fit(x: &Matrix) -> Self {
        let n = x.rows().max(1) as f64;
        let mut mean = vec![0.0; x.cols()];
        for row in x.iter_rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; x.cols()];
        for row in x.iter_rows() {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m).powi(2);
            }
        }
        let denom = (x.rows().max(2) - 1) as f64;
        let std = var
            .into_iter()
            .map(|s| {
                let sd = (s / denom).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardization { mean, std }
    }

    pub fn apply_row(&self, row: &[f64], out: &mut [f64]) {
        for (((o, v), m), s) in out.iter_mut().zip(row).zip(&self.mean).zip(&self.std) {
            *o = (v - m) / s;
        }
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        let mut out = x.clone();
        for r in 0..x.rows() {
            self.apply_row(x.row(r), out.row_mut(r));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkFile", into = "NetworkFile")]
pub struct Network {
    spec: NetworkSpec,
    /// `W_t`, shape `k_{t+1} x k_t`.
    pub weights: Vec<Matrix>,
    /// `b_t`, length `k_{t+1}`.
    pub biases: Vec<Vec<f64>>,
    /// Applied by [`Network::predict`] but not by [`Network::forward`].
    pub standardization: Option<Standardization>,
}

/// Gradient of the batch loss, shaped like the network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    fn zeros_like(net: &Network) -> Self {
        Gradients {
            weights: net.weights.iter().map(|w| Matrix::zeros(w.rows(), w.cols())).collect(),
            biases: net.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    fn clear(&mut self) {
        self.weights.iter_mut().for_each(|w| w.as_mut_slice().fill(0.0));
        self.biases.iter_mut().for_each(|b| b.fill(0.0));
    }

    /// All entries in parameter order: each layer's weights row-major, then its bias.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.as_slice());
            out.extend_from_slice(b);
        }
        out
    }
}

pub fn init_network(spec: &NetworkSpec, seed: u64) -> Result<Network> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::with_capacity(spec.n_layers());
    let mut biases = Vec::with_capacity(spec.n_layers());
    for pair in spec.layer_sizes.windows(2) {
        let (fan_in, fan_out) = (pair[0], pair[1]);
        let s = (6.0 / (fan_in + fan_out) as f64).sqrt();
        let data = (0..fan_in * fan_out).map(|_| rng.random_range(-s..=s)).collect();
        weights.push(Matrix::from_vec(fan_out, fan_in, data)?);
        biases.push(vec![0.0; fan_out]);
    }
    Ok(Network {
        spec: spec.clone(),
        weights,
        biases,
        standardization: None,
    })
}

/// Reusable per-layer buffers for forward and backward passes.
pub(crate) struct Workspace {
    /// `pre[t]` is the output of `phi_t`.
    pre: Vec<Vec<f64>>,
    /// `act[0]` is the input, `act[t + 1] = psi(pre[t])` for hidden layers.
    act: Vec<Vec<f64>>,
    delta: Vec<Vec<f64>>,
}

impl Workspace {
    pub(crate) fn new(spec: &NetworkSpec) -> Self {
        let sizes = &spec.layer_sizes;
        Workspace {
            pre: sizes[1..].iter().map(|&k| vec![0.0; k]).collect(),
            act: sizes[..sizes.len() - 1].iter().map(|&k| vec![0.0; k]).collect(),
            delta: sizes[1..].iter().map(|&k| vec![0.0; k]).collect(),
        }
    }
}

impl Network {
    /// Builds a network from explicit parameters, checking every shape.
    pub fn from_parts(spec: NetworkSpec, weights: Vec<Matrix>, biases: Vec<Vec<f64>>) -> Result<Self> {
        spec.validate()?;
        if weights.len() != spec.n_layers() || biases.len() != spec.n_layers() {
            return Err(Error::DimensionMismatch {
                expected: spec.n_layers(),
                got: weights.len().min(biases.len()),
            });
        }
        for (t, pair) in spec.layer_sizes.windows(2).enumerate() {
            let (w, b) = (&weights[t], &biases[t]);
            if w.rows() != pair[1] || w.cols() != pair[0] {
                return Err(Error::DimensionMismatch {
                    expected: pair[0] * pair[1],
                    got: w.rows() * w.cols(),
                });
            }
            if b.len() != pair[1] {
                return Err(Error::DimensionMismatch {
                    expected: pair[1],
                    got: b.len(),
                });
            }
        }
        let net = Network {
            spec,
            weights,
            biases,
            standardization: None,
        };
        if !net.is_finite() {
            return Err(Error::Config("network parameters must be finite".into()));
        }
        Ok(net)
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().all(Matrix::is_finite) && self.biases.iter().flatten().all(|v| v.is_finite())
    }

    fn check_input(&self, len: usize) -> Result<()> {
        if len != self.spec.input_width() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.input_width(),
                got: len,
            });
        }
        Ok(())
    }

    /// Output of the network on a raw input vector.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x.len())?;
        let mut ws = Workspace::new(&self.spec);
        Ok(self.forward_ws(x, &mut ws))
    }

    pub(crate) fn forward_ws(&self, x: &[f64], ws: &mut Workspace) -> f64 {
        ws.act[0].copy_from_slice(x);
        let last = self.spec.n_layers() - 1;
        let act = self.spec.activation;
        for t in 0..=last {
            let (w, b) = (&self.weights[t], &self.biases[t]);
            w.mul_vec(&ws.act[t], &mut ws.pre[t]);
            for (z, bias) in ws.pre[t].iter_mut().zip(b) {
                *z += bias;
            }
            if t < last {
                let (pre, next) = (&ws.pre[t], &mut ws.act[t + 1]);
                for (a, &z) in next.iter_mut().zip(pre) {
                    *a = act.apply(z);
                }
            }
        }
        ws.pre[last][0]
    }

    /// Applies the stored input standardization (if any), then [`forward`](Self::forward).
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x.len())?;
        match &self.standardization {
            Some(s) => {
                let mut z = vec![0.0; x.len()];
                s.apply_row(x, &mut z);
                self.forward(&z)
            }
            None => self.forward(x),
        }
    }

    pub fn predict_rows(&self, x: &Matrix) -> Result<Vec<f64>> {
        self.check_input(x.cols())?;
        let mut ws = Workspace::new(&self.spec);
        let mut buf = vec![0.0; x.cols()];
        Ok(x
            .iter_rows()
            .map(|row| match &self.standardization {
                Some(s) => {
                    s.apply_row(row, &mut buf);
                    self.forward_ws(&buf, &mut ws)
                }
                None => self.forward_ws(row, &mut ws),
            })
            .collect())
    }

    fn check_batch(&self, x: &Matrix, y: &[f64]) -> Result<()> {
        self.check_input(x.cols())?;
        if x.rows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.rows(),
                got: y.len(),
            });
        }
        if y.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        Ok(())
    }

    /// Mean squared error of [`forward`](Self::forward) over the rows of `x`.
    pub fn loss_mse_batch(&self, x: &Matrix, y: &[f64]) -> Result<f64> {
        self.check_batch(x, y)?;
        let mut ws = Workspace::new(&self.spec);
        Ok(self.loss_ws(x, y, &mut ws))
    }

    pub(crate) fn loss_ws(&self, x: &Matrix, y: &[f64], ws: &mut Workspace) -> f64 {
        let total: f64 = x
            .iter_rows()
            .zip(y)
            .map(|(row, &t)| (self.forward_ws(row, ws) - t).powi(2))
            .sum();
        total / y.len() as f64
    }

    /// Exact gradient of [`loss_mse_batch`](Self::loss_mse_batch).
    pub fn backprop(&self, x: &Matrix, y: &[f64]) -> Result<Gradients> {
        self.check_batch(x, y)?;
        let mut ws = Workspace::new(&self.spec);
        let mut grads = Gradients::zeros_like(self);
        let rows: Vec<usize> = (0..x.rows()).collect();
        self.backprop_ws(x, y, &rows, &mut ws, &mut grads);
        Ok(grads)
    }

    /// Accumulates the gradient of the mean loss over `rows` into a cleared `grads`.
    pub(crate) fn backprop_ws(&self, x: &Matrix, y: &[f64], rows: &[usize], ws: &mut Workspace, grads: &mut Gradients) {
        grads.clear();
        let scale = 2.0 / rows.len() as f64;
        let last = self.spec.n_layers() - 1;
        let act = self.spec.activation;
        for &r in rows {
            let out = self.forward_ws(x.row(r), ws);
            ws.delta[last][0] = scale * (out - y[r]);
            for t in (0..=last).rev() {
                {
                    let delta = &ws.delta[t];
                    let input = &ws.act[t];
                    let gw = &mut grads.weights[t];
                    for (i, &d) in delta.iter().enumerate() {
                        if d == 0.0 {
                            continue;
                        }
                        for (g, &a) in gw.row_mut(i).iter_mut().zip(input) {
                            *g += d * a;
                        }
                    }
                    for (g, &d) in grads.biases[t].iter_mut().zip(delta) {
                        *g += d;
                    }
                }
                if t > 0 {
                    let (lower, upper) = ws.delta.split_at_mut(t);
                    let prev = &mut lower[t - 1];
                    self.weights[t].mul_vec_transposed(&upper[0], prev);
                    for (d, &z) in prev.iter_mut().zip(&ws.pre[t - 1]) {
                        *d *= act.derivative(z);
                    }
                }
            }
        }
    }

    /// Hidden pre-activations (outputs of `phi_0 .. phi_{p-1}`) for one input.
    pub fn hidden_preactivations(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x.len())?;
        let mut ws = Workspace::new(&self.spec);
        self.forward_ws(x, &mut ws);
        let last = self.spec.n_layers() - 1;
        Ok(ws.pre[..last].iter().flatten().copied().collect())
    }

    /// Parameters in the same order as [`Gradients::flatten`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.as_slice());
            out.extend_from_slice(b);
        }
        out
    }

    pub(crate) fn param_mut(&mut self, mut index: usize) -> &mut f64 {
        for (w, b) in self.weights.iter_mut().zip(self.biases.iter_mut()) {
            let nw = w.as_slice().len();
            if index < nw {
                return &mut w.as_mut_slice()[index];
            }
            index -= nw;
            if index < b.len() {
                return &mut b[index];
            }
            index -= b.len();
        }
        panic!("parameter index out of range");
    }

    pub fn n_params(&self) -> usize {
        let (w, b) = param_count(&self.spec);
        w + b
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    schema_version: u32,
    spec: NetworkSpec,
    standardization: Option<Standardization>,
    weights: Vec<Matrix>,
    biases: Vec<Vec<f64>>,
}

impl TryFrom<NetworkFile> for Network {
    type Error = Error;
    fn try_from(f: NetworkFile) -> Result<Self> {
        if f.schema_version != NETWORK_SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported network schema version {}", f.schema_version)));
        }
        let mut net = Network::from_parts(f.spec, f.weights, f.biases)?;
        if let Some(s) = &f.standardization {
            if s.mean.len() != net.spec.input_width() || s.std.len() != net.spec.input_width() {
                return Err(Error::DimensionMismatch {
                    expected: net.spec.input_width(),
                    got: s.mean.len(),
                });
            }
        }
        net.standardization = f.standardization;
        Ok(net)
    }
}

impl From<Network> for NetworkFile {
    fn from(n: Network) -> Self {
        NetworkFile {
            schema_version: NETWORK_SCHEMA_VERSION,
            spec: n.spec,
            standardization: n.standardization,
            weights: n.weights,
            biases: n.biases,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_count_anchors() {
        let big = NetworkSpec::new(vec![18, 100, 100, 1], Activation::Relu).unwrap();
        assert_eq!(param_count(&big), (11900, 201));
        let small = NetworkSpec::new(vec![15, 5, 1], Activation::Relu).unwrap();
        assert_eq!(param_count(&small).0, 80);
        let affine = NetworkSpec::new(vec![7, 1], Activation::Relu).unwrap();
        assert_eq!(param_count(&affine), (7, 1));
    }

    #[test]
    fn spec_validation() {
        assert!(NetworkSpec::new(vec![3], Activation::Relu).is_err());
        assert!(NetworkSpec::new(vec![3, 0, 1], Activation::Relu).is_err());
        assert!(NetworkSpec::new(vec![3, 4, 2], Activation::Relu).is_err());
        assert_eq!(
            NetworkSpec::with_hidden(3, &[4, 4], Activation::Tanh).unwrap().layer_sizes,
            vec![3, 4, 4, 1]
        );
    }

    #[test]
    fn init_is_seeded_with_zero_biases() {
        let spec = NetworkSpec::new(vec![4, 8, 1], Activation::Relu).unwrap();
        let a = init_network(&spec, 5).unwrap();
        let b = init_network(&spec, 5).unwrap();
        let c = init_network(&spec, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.weights, c.weights);
        assert!(a.biases.iter().flatten().all(|&v| v == 0.0));
        let s = (6.0f64 / 12.0).sqrt();
        assert!(a.weights[0].as_slice().iter().all(|w| w.abs() <= s));
    }

    #[test]
    fn forward_hand_trace() {
        let spec = NetworkSpec::new(vec![1, 1, 1], Activation::Relu).unwrap();
        let net = Network::from_parts(
            spec,
            vec![Matrix::from_rows(&[[1.0]]).unwrap(), Matrix::from_rows(&[[2.0]]).unwrap()],
            vec![vec![-1.0], vec![3.0]],
        )
        .unwrap();
        // 2 * max(2 - 1, 0) + 3
        assert_eq!(net.forward(&[2.0]).unwrap(), 5.0);
        assert_eq!(net.forward(&[0.0]).unwrap(), 3.0);
        assert!(net.forward(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn affine_and_zero_networks() {
        let spec = NetworkSpec::new(vec![3, 1], Activation::Relu).unwrap();
        let net = Network::from_parts(spec, vec![Matrix::from_rows(&[[1.0, -2.0, 0.5]]).unwrap()], vec![vec![4.0]]).unwrap();
        assert_eq!(net.forward(&[1.0, 1.0, 2.0]).unwrap(), 1.0 - 2.0 + 1.0 + 4.0);

        let spec = NetworkSpec::new(vec![2, 3, 1], Activation::Relu).unwrap();
        let mut zero = init_network(&spec, 0).unwrap();
        zero.weights.iter_mut().for_each(|w| w.as_mut_slice().fill(0.0));
        zero.biases[1][0] = 2.5;
        assert_eq!(zero.forward(&[7.0, -3.0]).unwrap(), 2.5);
    }

    #[test]
    fn loss_cases() {
        let spec = NetworkSpec::new(vec![1, 1], Activation::Relu).unwrap();
        let net = Network::from_parts(spec, vec![Matrix::from_rows(&[[1.0]]).unwrap()], vec![vec![0.0]]).unwrap();
        let x = Matrix::from_rows(&[[1.0], [2.0]]).unwrap();
        assert_eq!(net.loss_mse_batch(&x, &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(net.loss_mse_batch(&Matrix::from_rows(&[[1.0]]).unwrap(), &[3.0]).unwrap(), 4.0);
        // errors 1 and 3
        assert_eq!(net.loss_mse_batch(&x, &[0.0, 5.0]).unwrap(), 5.0);
        assert!(net.loss_mse_batch(&Matrix::zeros(0, 1), &[]).is_err());
    }

    #[test]
    fn affine_gradient_matches_closed_form() {
        // loss = (1/n) sum (w.x + b - y)^2, dL/dw = (2/n) X^T r, dL/db = (2/n) sum r
        let spec = NetworkSpec::new(vec![2, 1], Activation::Tanh).unwrap();
        let w = [0.5, -1.5];
        let b = 0.25;
        let net = Network::from_parts(spec, vec![Matrix::from_rows(&[w]).unwrap()], vec![vec![b]]).unwrap();
        let rows = [[1.0, 2.0], [-1.0, 0.5], [3.0, -2.0]];
        let y = [0.0, 1.0, -1.0];
        let x = Matrix::from_rows(&rows).unwrap();
        let g = net.backprop(&x, &y).unwrap();
        let n = rows.len() as f64;
        let resid: Vec<f64> = rows.iter().zip(&y).map(|(r, t)| w[0] * r[0] + w[1] * r[1] + b - t).collect();
        for c in 0..2 {
            let expected: f64 = 2.0 / n * rows.iter().zip(&resid).map(|(r, e)| r[c] * e).sum::<f64>();
            assert!((g.weights[0].get(0, c) - expected).abs() < 1e-14);
        }
        let expected_b: f64 = 2.0 / n * resid.iter().sum::<f64>();
        assert!((g.biases[0][0] - expected_b).abs() < 1e-14);
    }

    #[test]
    fn dead_relu_on_zero_inputs() {
        let spec = NetworkSpec::new(vec![3, 4, 1], Activation::Relu).unwrap();
        let net = init_network(&spec, 11).unwrap();
        let x = Matrix::zeros(5, 3);
        let g = net.backprop(&x, &[1.0; 5]).unwrap();
        assert!(g.weights[0].as_slice().iter().all(|&v| v == 0.0));
        assert!(g.biases[1][0] != 0.0);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let spec = NetworkSpec::new(vec![3, 5, 2, 1], Activation::Logistic).unwrap();
        let mut net = init_network(&spec, 3).unwrap();
        net.biases[0][1] = 1.0 / 3.0;
        net.standardization = Some(Standardization {
            mean: vec![0.1, 0.2, std::f64::consts::PI],
            std: vec![1.0, 2.0, 1e-3],
        });
        let back = Network::from_json(&net.to_json()).unwrap();
        assert_eq!(back, net);
        let stored: usize = back.weights.iter().map(|w| w.as_slice().len()).sum::<usize>()
            + back.biases.iter().map(Vec::len).sum::<usize>();
        let (nw, nb) = param_count(&spec);
        assert_eq!(stored, nw + nb);
    }

    #[test]
    fn json_shape_mismatch_rejected() {
        let spec = NetworkSpec::new(vec![2, 1], Activation::Relu).unwrap();
        let net = init_network(&spec, 0).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&net.to_json()).unwrap();
        value["spec"]["layer_sizes"][0] = 3.into();
        let text = value.to_string();
        assert!(Network::from_json(&text).is_err());
    }
}
