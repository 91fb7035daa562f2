//! Matrix Beta draws approach the Gaussian ensembles; the L² distance to ½I shrinks like 1/n.

use matmoments::lab::{run_beta_clt, ExperimentConfig, ExperimentKind};
use matmoments::linalg::FieldCase;

fn main() -> matmoments::Result<()> {
    for field in [FieldCase::Real, FieldCase::Complex] {
        let config = ExperimentConfig::new(ExperimentKind::BetaToGaussian, field, 2, 400, 1)
            .with_samples(20_000)
            .with_seed(3);
        let report = run_beta_clt(&config)?.report;
        println!("{} field, pass={}", field.name(), report.pass);
        for c in &report.coordinates {
            println!(
                "  {:<8} var {:.3} (target {:.1})  KS {:.4}",
                c.label, c.variance, c.target_variance, c.ks
            );
        }
        for l in &report.ladder {
            println!(
                "  n={:<4} E|X-I/2|^2 {:.3e}  exact {:.3e}",
                l.n, l.empirical, l.exact
            );
        }
    }
    Ok(())
}
