// Check gradients, train a Jones-to-volume network, save it, load it back and rescore.
//
// With a larger export the default architecture (two hidden layers of 100) is
// what the `train-ann` subcommand uses; the bundled fixture only has ten knots,
// so this example shrinks everything.

use knotstat::ann::{grad_check, init_network, Activation, NetworkSpec, TrainConfig};
use knotstat::experiments::{evaluate_model, train_model, AnnConfig, InputInvariant, TargetInvariant, TrainedModel};
use knotstat::knot_data::{load_dataset, KnotClass};
use knotstat::linalg::Matrix;

pub fn run_example() -> knotstat::Result<()> {
    // finite differences against backprop on a small random network
    let spec = NetworkSpec::new(vec![4, 8, 8, 1], Activation::Tanh)?;
    let net = init_network(&spec, 3)?;
    let x = Matrix::from_rows(&[[0.1, -0.4, 0.7, 0.2], [1.0, 0.3, -0.5, -0.9], [-0.2, 0.8, 0.0, 0.4]])?;
    let deviation = grad_check(&net, &x, &[0.5, -1.0, 2.0], 1e-5)?;
    println!("gradient check: max relative deviation {deviation:.2e}");

    let ds = load_dataset(knotstat::cli::DEFAULT_DATA)?;
    let cfg = AnnConfig {
        hidden: vec![5],
        activation: Activation::Relu,
        train: TrainConfig {
            batch_size: 4,
            epochs: 300,
            learning_rate: 1e-2,
            ..TrainConfig::default()
        },
    };
    let model = train_model(&ds, InputInvariant::JonesVector, TargetInvariant::Vol, KnotClass::All, &cfg, 0.8, 42)?;
    println!(
        "{} parameters, final training loss {:.4}, test mape {:?} (baseline {:?})",
        model.network.n_params(),
        model.loss_history.last().copied().unwrap_or(f64::NAN),
        model.test.mape,
        model.baseline.mape,
    );

    let path = std::env::temp_dir().join("knotstat_example_model.json");
    std::fs::write(&path, serde_json::to_string_pretty(&model).expect("model serializes"))
        .map_err(|e| knotstat::Error::io(&path, e))?;
    let text = std::fs::read_to_string(&path).map_err(|e| knotstat::Error::io(&path, e))?;
    let loaded: TrainedModel = serde_json::from_str(&text).map_err(|e| knotstat::Error::Config(e.to_string()))?;
    let eval = evaluate_model(&loaded, &ds)?;
    println!("reloaded model on all {} knots: mse {:.4}", eval.n, eval.report.mse);
    let _ = std::fs::remove_file(path);
    Ok(())
}

fn main() -> knotstat::Result<()> {
    run_example()
}
