//! Closed-form volumes of the moment space next to a rejection-sampling estimate.

use matmoments::lab::{run_volume_check, ExperimentConfig, ExperimentKind};
use matmoments::linalg::FieldCase;
use matmoments::moment_space::log_volume;

fn main() -> matmoments::Result<()> {
    for (n, p, field) in [
        (2, 1, FieldCase::Real),
        (3, 1, FieldCase::Real),
        (1, 2, FieldCase::Real),
        (1, 2, FieldCase::Complex),
    ] {
        let exact = log_volume(n, p, field)?.exp();
        let config = ExperimentConfig::new(ExperimentKind::VolumeCheck, field, p, n, 1)
            .with_samples(200_000)
            .with_seed(1);
        let estimate = run_volume_check(&config)?
            .report
            .volume
            .expect("volume report");
        println!(
            "n={n} p={p} {:<7} exact {exact:.6}  estimate {:.6} ± {:.6}",
            field.name(),
            estimate.estimate,
            estimate.standard_error
        );
    }
    println!(
        "log vol(M_20), p=3: {:.2}",
        log_volume(20, 3, FieldCase::Real)?
    );
    Ok(())
}
