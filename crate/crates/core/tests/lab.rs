use matmoments::lab::{
    run_beta_clt, run_experiment, run_volume_check, ExperimentConfig, ExperimentKind, StatReport,
};
use matmoments::linalg::FieldCase;

const FIELDS: [FieldCase; 2] = [FieldCase::Real, FieldCase::Complex];

fn max_ks(report: &StatReport) -> f64 {
    report.coordinates.iter().map(|c| c.ks).fold(0.0, f64::max)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len().is_multiple_of(2) {
        0.5 * (xs[m - 1] + xs[m])
    } else {
        xs[m]
    }
}

fn beta_ks(field: FieldCase, p: usize, n: usize, seed: u64) -> f64 {
    let mut config = ExperimentConfig::new(ExperimentKind::BetaToGaussian, field, p, n, 1)
        .with_samples(20_000)
        .with_seed(seed);
    config.n_ladder = Vec::new();
    max_ks(&run_beta_clt(&config).unwrap().report)
}

#[test]
#[ignore = "below Monte Carlo resolution: the KS gap between n=100 and n=800 is about 4e-4, the noise about 6e-3"]
fn beta_ks_median_does_not_grow_with_n() {
    let mut failures = Vec::new();
    for field in FIELDS {
        for p in 1..=2 {
            let small = median((0..10).map(|s| beta_ks(field, p, 100, s)).collect());
            let large = median((0..10).map(|s| beta_ks(field, p, 800, 100 + s)).collect());
            println!(
                "{} p={p}: median KS n=100 {small:.6}, n=800 {large:.6}",
                field.name()
            );
            if large > small {
                failures.push(format!("{} p={p}", field.name()));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "median KS grew with n for {failures:?}"
    );
}

#[test]
fn jacobian_check_matches_a_kron_identity() {
    for field in FIELDS {
        for p in 1..=3 {
            for k in 1..=6 {
                let config = ExperimentConfig::new(ExperimentKind::JacobianCheck, field, p, k, k);
                let report = run_experiment(&config).unwrap().report;
                assert!(
                    report.pass,
                    "{field:?} p={p} k={k}: {}",
                    report.max_deviation
                );
                assert!(report.max_deviation < 1e-5);
            }
        }
    }
}

#[test]
fn volume_check_reproduces_the_closed_form() {
    for (n, p) in [(2, 1), (3, 1), (1, 2)] {
        let config = ExperimentConfig::new(ExperimentKind::VolumeCheck, FieldCase::Real, p, n, 1)
            .with_samples(200_000)
            .with_seed(n as u64 * 10 + p as u64);
        let volume = run_volume_check(&config).unwrap().report.volume.unwrap();
        assert!(volume.z < 3.0, "(n={n}, p={p}): z={}", volume.z);
    }
}

#[test]
fn complex_volume_check_matches_pi_over_twelve() {
    let config = ExperimentConfig::new(ExperimentKind::VolumeCheck, FieldCase::Complex, 2, 1, 1)
        .with_samples(200_000)
        .with_seed(5);
    let volume = run_volume_check(&config).unwrap().report.volume.unwrap();
    assert!((volume.exact - std::f64::consts::PI / 12.0).abs() < 1e-12);
    assert!(volume.z < 3.0, "z={}", volume.z);
}

#[test]
fn canonical_vector_blocks_are_uncorrelated() {
    for field in FIELDS {
        let config = ExperimentConfig::new(ExperimentKind::CanonicalVector, field, 2, 300, 3)
            .with_samples(20_000)
            .with_seed(8);
        let report = run_experiment(&config).unwrap().report;
        assert!(report.pass, "{:?}", report.verdicts);
    }
}

#[test]
fn reports_record_their_configuration() {
    let config = ExperimentConfig::new(ExperimentKind::MomentVector, FieldCase::Complex, 2, 50, 2)
        .with_samples(500)
        .with_seed(4);
    let report = run_experiment(&config).unwrap().report;
    assert_eq!(report.config, config);
    assert_eq!(report.coordinates.len(), 8);
    assert_eq!(report.covariance.len(), 8);
    assert!(report.wall_time_seconds.is_none());
    let json = serde_json::to_string(&report).unwrap();
    let back: StatReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
}
