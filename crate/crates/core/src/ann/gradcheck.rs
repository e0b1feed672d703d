use super::{Activation, Network, Workspace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Compares [`Network::backprop`] with central finite differences.
///
/// Returns the largest `|analytic - numeric| / max(1e-12, |analytic| + |numeric|)`
/// over all parameters. For ReLU networks, rows with a hidden pre-activation
/// within `10 * eps` of zero are left out, since the loss has a kink there.
pub fn grad_check(net: &Network, x: &Matrix, y: &[f64], eps: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&eps) {
        return Err(Error::Config(format!("grad_check eps {eps} outside [1e-7, 1e-3]")));
    }
    net.check_batch(x, y)?;
    let rows: Vec<usize> = if net.spec.activation == Activation::Relu {
        (0..x.rows())
            .filter(|&r| {
                net.hidden_preactivations(x.row(r))
                    .map(|z| z.iter().all(|v| v.abs() >= 10.0 * eps))
                    .unwrap_or(false)
            })
            .collect()
    } else {
        (0..x.rows()).collect()
    };
    if rows.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            got: 0,
        });
    }
    let xs = x.select_rows(&rows);
    let ys: Vec<f64> = rows.iter().map(|&r| y[r]).collect();

    let analytic = net.backprop(&xs, &ys)?.flatten();
    let mut probe = net.clone();
    let mut ws = Workspace::new(&net.spec);
    let mut worst = 0.0f64;
    for (i, &g) in analytic.iter().enumerate() {
        let original = *probe.param_mut(i);
        *probe.param_mut(i) = original + eps;
        let up = probe.loss_ws(&xs, &ys, &mut ws);
        *probe.param_mut(i) = original - eps;
        let down = probe.loss_ws(&xs, &ys, &mut ws);
        *probe.param_mut(i) = original;
        let numeric = (up - down) / (2.0 * eps);
        let dev = (g - numeric).abs() / (g.abs() + numeric.abs()).max(1e-12);
        worst = worst.max(dev);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ann::{init_network, NetworkSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_batch(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> (Matrix, Vec<f64>) {
        let data = (0..rows * cols).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
        (Matrix::from_vec(rows, cols, data).unwrap(), y)
    }

    #[test]
    fn smooth_networks_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for act in [Activation::Tanh, Activation::Logistic] {
            let spec = NetworkSpec::new(vec![3, 6, 4, 1], act).unwrap();
            let mut net = init_network(&spec, 2).unwrap();
            net.biases.iter_mut().flatten().for_each(|b| *b = rng.random_range(-0.5..0.5));
            let (x, y) = random_batch(&mut rng, 12, 3);
            assert!(grad_check(&net, &x, &y, 1e-5).unwrap() < 1e-6);
        }
    }

    #[test]
    fn relu_away_from_kinks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = NetworkSpec::new(vec![2, 5, 1], Activation::Relu).unwrap();
        let net = init_network(&spec, 4).unwrap();
        let (x, y) = random_batch(&mut rng, 16, 2);
        assert!(grad_check(&net, &x, &y, 1e-5).unwrap() < 1e-6);
    }

    #[test]
    fn eps_range_and_all_rows_on_kinks() {
        let spec = NetworkSpec::new(vec![1, 2, 1], Activation::Relu).unwrap();
        let net = init_network(&spec, 0).unwrap();
        let x = Matrix::zeros(3, 1);
        assert!(matches!(grad_check(&net, &x, &[0.0; 3], 1.0), Err(Error::Config(_))));
        assert!(grad_check(&net, &x, &[0.0; 3], 1e-5).is_err());
    }
}
