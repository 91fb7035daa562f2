//! The standardized moment vector of a uniform draw from M_n.

use matmoments::lab::{run_moment_vector_clt, ExperimentConfig, ExperimentKind};
use matmoments::linalg::FieldCase;
use matmoments::moment_space::clt_matrix_A;

fn main() -> matmoments::Result<()> {
    println!("A =\n{}", clt_matrix_A(3));
    let config = ExperimentConfig::new(ExperimentKind::MomentVector, FieldCase::Real, 2, 400, 3)
        .with_samples(10_000)
        .with_seed(1);
    let report = run_moment_vector_clt(&config)?.report;
    for c in &report.coordinates {
        println!(
            "{:<8} mean {:+.3}  var {:.3}  KS {:.4}",
            c.label, c.mean, c.variance, c.ks
        );
    }
    println!("max |cov - target| = {:.4}", report.max_deviation);
    Ok(())
}
