//! Runs an experiment config the way `matmoments verify` does and prints the report.

use matmoments::lab::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"{
    "kind": "CanonicalVector",
    "field": "complex",
    "p": 2,
    "n": 300,
    "k": 3,
    "samples": 5000,
    "seed": 42
}"#;

fn main() -> matmoments::Result<()> {
    let config: ExperimentConfig = serde_json::from_str(CONFIG)?;
    let experiment = run_experiment(&config)?;
    for v in &experiment.report.verdicts {
        println!(
            "{:<28} {:.4} < {:.4}: {}",
            v.criterion, v.value, v.threshold, v.pass
        );
    }
    println!("pass: {}", experiment.report.pass);
    Ok(())
}
