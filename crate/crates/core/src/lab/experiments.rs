use rand::Rng;

use super::{
    ks_statistic, CoordinateStat, CoordinateTable, ExperimentConfig, ExperimentKind,
    GaussianTarget, LadderPoint, StatReport, Verdict, VolumeEstimate,
};
use crate::canonical::{canonical_to_moments, kron_identity, numerical_jacobian_at_center};
use crate::ensembles::{
    beta_moment_formulas, purpose, sample_matrix_beta_counted, sample_uniform_canonical_prefix,
    BetaParams, RngState,
};
use crate::error::{Error, Result};
use crate::linalg::{FieldCase, SymHermMatrix, Tolerance};
use crate::moment_space::{
    clt_matrix_A, is_interior, log_volume, standardize_moment_vector, CltConstants, MomentSequence,
};
use crate::parallel::map_indexed;

/// A finished experiment: the report plus the raw standardized coordinates, when there are any.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub report: StatReport,
    pub table: Option<CoordinateTable>,
}

/// Dispatches on `config.kind` after validating the configuration.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    config.validate()?;
    match config.kind {
        ExperimentKind::BetaToGaussian => run_beta_clt(config),
        ExperimentKind::MomentVector => run_moment_vector_clt(config),
        ExperimentKind::CanonicalVector => run_canonical_vector_clt(config),
        ExperimentKind::JacobianCheck => run_jacobian_check(config),
        ExperimentKind::VolumeCheck => run_volume_check(config),
    }
}

fn expect_kind(config: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    config.validate()?;
    if config.kind != kind {
        return Err(Error::Config(format!(
            "expected a {kind:?} config, got {:?}",
            config.kind
        )));
    }
    Ok(())
}

/// `sqrt(8γn) (X - ½I)`.
pub fn standardize_beta_sample(x: &SymHermMatrix, gamma: f64, n: usize) -> SymHermMatrix {
    let half = SymHermMatrix::scaled_identity(x.field(), x.p(), 0.5);
    (x - &half).scale((8.0 * gamma * n as f64).sqrt())
}

/// `γ` with `a_n = γ n` matching the canonical-moment parameters: `(p+1)/2` real, `p` complex.
fn beta_gamma(field: FieldCase, p: usize) -> f64 {
    match field {
        FieldCase::Real => (p as f64 + 1.0) / 2.0,
        FieldCase::Complex => p as f64,
    }
}

/// Exact `E‖X - ½I‖²_F = p (c₂ - c₁²)` for `X ~ Beta_p(a, a)`.
pub fn beta_l2_exact(field: FieldCase, p: usize, a: f64) -> Result<f64> {
    let (c1, c2) = beta_moment_formulas(&BetaParams::new(field, p, a, a)?)?;
    Ok(p as f64 * (c2 - c1 * c1))
}

struct Summary {
    coordinates: Vec<CoordinateStat>,
    mean: Vec<f64>,
    covariance: Vec<Vec<f64>>,
    target: Vec<Vec<f64>>,
}

fn block_labels(prefix: &str, blocks: usize, field: FieldCase, p: usize) -> Vec<String> {
    let base = SymHermMatrix::coordinate_labels(field, p);
    (1..=blocks)
        .flat_map(|b| base.iter().map(move |l| format!("{prefix}{b} {l}")))
        .collect()
}

fn block_targets(blocks: usize, p: usize, field: FieldCase) -> Vec<f64> {
    let d = field.real_dimension(p);
    (0..blocks * d)
        .map(|i| if i % d < p { 1.0 } else { 0.5 })
        .collect()
}

fn summarize(labels: &[String], targets: &[f64], rows: &[Vec<f64>]) -> Result<Summary> {
    let dim = labels.len();
    let count = rows.len() as f64;
    let mean: Vec<f64> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / count)
        .collect();
    let mut covariance = vec![vec![0.0; dim]; dim];
    for r in rows {
        for i in 0..dim {
            let di = r[i] - mean[i];
            for j in i..dim {
                covariance[i][j] += di * (r[j] - mean[j]);
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            covariance[i][j] /= count - 1.0;
            covariance[j][i] = covariance[i][j];
        }
    }
    let coordinates = (0..dim)
        .map(|j| {
            let column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            Ok(CoordinateStat {
                label: labels[j].clone(),
                target_variance: targets[j],
                mean: mean[j],
                variance: covariance[j][j],
                ks: ks_statistic(&column, GaussianTarget::from_variance(targets[j]))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let target = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { targets[i] } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(Summary {
        coordinates,
        mean,
        covariance,
        target,
    })
}

fn max_cov_deviation(s: &Summary, include: impl Fn(usize, usize) -> bool) -> f64 {
    let mut worst = 0.0_f64;
    for (i, row) in s.covariance.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if include(i, j) {
                worst = worst.max((c - s.target[i][j]).abs());
            }
        }
    }
    worst
}

fn ks_verdicts(s: &Summary, threshold: f64) -> Vec<Verdict> {
    s.coordinates
        .iter()
        .map(|c| Verdict::below(format!("ks {}", c.label), c.ks, threshold))
        .collect()
}

fn finish(
    config: &ExperimentConfig,
    summary: Option<Summary>,
    table: Option<CoordinateTable>,
    max_deviation: f64,
    resampled: usize,
    ladder: Vec<LadderPoint>,
    volume: Option<VolumeEstimate>,
    verdicts: Vec<Verdict>,
) -> Experiment {
    let pass = verdicts.iter().all(|v| v.pass);
    let (coordinates, mean, covariance, target_covariance) = match summary {
        Some(s) => (s.coordinates, s.mean, s.covariance, s.target),
        None => Default::default(),
    };
    Experiment {
        report: StatReport {
            config: config.clone(),
            thresholds: config.thresholds(),
            coordinates,
            mean,
            covariance,
            target_covariance,
            ladder,
            volume,
            max_deviation,
            resampled,
            verdicts,
            pass,
            wall_time_seconds: None,
        },
        table,
    }
}

/// Standardized matrix Beta draws `Beta_p(γn, γn)` against the GOE/GUE entry laws, plus the
/// `L²` ladder `E‖X - ½I‖²` over `config.n_ladder`.
pub fn run_beta_clt(config: &ExperimentConfig) -> Result<Experiment> {
    expect_kind(config, ExperimentKind::BetaToGaussian)?;
    let (field, p, n) = (config.field, config.p, config.n);
    let gamma = beta_gamma(field, p);
    let a = gamma * n as f64;
    let params = BetaParams::new(field, p, a, a)?;
    let root = RngState::new(config.seed);
    let draws = map_indexed(config.samples, |i| {
        let mut rng = root.substream(i as u64, purpose::BETA_CLT).rng();
        sample_matrix_beta_counted(&params, &mut rng).map(|(x, rejected)| {
            let z = standardize_beta_sample(&x, gamma, n).scale(config.scale_multiplier);
            (z.coordinates(), rejected)
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut resampled: usize = draws.iter().map(|d| d.1).sum();
    let rows: Vec<Vec<f64>> = draws.into_iter().map(|d| d.0).collect();

    let labels = SymHermMatrix::coordinate_labels(field, p);
    let targets = block_targets(1, p, field);
    let summary = summarize(&labels, &targets, &rows)?;
    let t = config.thresholds();
    let mut verdicts = ks_verdicts(&summary, t.ks);
    let max_deviation = max_cov_deviation(&summary, |_, _| true);

    let mut ladder = Vec::with_capacity(config.n_ladder.len());
    for (rung, &m) in config.n_ladder.iter().enumerate() {
        let a_m = gamma * m as f64;
        let params = BetaParams::new(field, p, a_m, a_m)?;
        let rung_root = root.substream(rung as u64, purpose::LADDER);
        let norms = map_indexed(config.samples, |i| {
            let mut rng = rung_root.substream(i as u64, purpose::BETA_CLT).rng();
            sample_matrix_beta_counted(&params, &mut rng).map(|(x, rejected)| {
                let half = SymHermMatrix::scaled_identity(field, p, 0.5);
                ((&x - &half).frobenius_norm().powi(2), rejected)
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        resampled += norms.iter().map(|d| d.1).sum::<usize>();
        let empirical = norms.iter().map(|d| d.0).sum::<f64>() / norms.len() as f64;
        let exact = beta_l2_exact(field, p, a_m)?;
        let relative_error = (empirical - exact).abs() / exact;
        verdicts.push(Verdict::below(
            format!("l2 relative error n={m}"),
            relative_error,
            t.l2_relative,
        ));
        ladder.push(LadderPoint {
            n: m,
            a: a_m,
            empirical,
            exact,
            relative_error,
        });
    }
    if ladder.len() >= 2 {
        let worst_step = ladder
            .windows(2)
            .map(|w| w[1].empirical - w[0].empirical)
            .fold(f64::NEG_INFINITY, f64::max);
        verdicts.push(Verdict::below(
            "l2 strictly decreasing (max step)",
            worst_step,
            0.0,
        ));
    }

    let table = CoordinateTable { labels, rows };
    Ok(finish(
        config,
        Some(summary),
        Some(table),
        max_deviation,
        resampled,
        ladder,
        None,
        verdicts,
    ))
}

/// Standardized moment vectors `(S_1, ..., S_k)` of uniform draws from `M_n`.
///
/// Only `U_1, ..., U_k` are drawn: `S_1, ..., S_k` depend on them alone and the canonical
/// moments are independent, so this is exact in distribution.
pub fn run_moment_vector_clt(config: &ExperimentConfig) -> Result<Experiment> {
    expect_kind(config, ExperimentKind::MomentVector)?;
    let (field, p, n, k) = (config.field, config.p, config.n, config.k);
    let root = RngState::new(config.seed);
    let rows = map_indexed(config.samples, |i| -> Result<Vec<f64>> {
        let mut rng = root.substream(i as u64, purpose::MOMENT_CLT).rng();
        let u = sample_uniform_canonical_prefix(n, k, p, field, &mut rng)?;
        let z = standardize_moment_vector(&canonical_to_moments(&u)?, n)?;
        Ok(z.iter()
            .flat_map(|m| m.scale(config.scale_multiplier).coordinates())
            .collect())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let labels = block_labels("S", k, field, p);
    let targets = block_targets(k, p, field);
    let summary = summarize(&labels, &targets, &rows)?;
    let t = config.thresholds();
    let mut verdicts = ks_verdicts(&summary, t.ks);
    let max_deviation = max_cov_deviation(&summary, |_, _| true);
    verdicts.push(Verdict::below(
        "max |cov - target|",
        max_deviation,
        t.covariance,
    ));
    Ok(finish(
        config,
        Some(summary),
        Some(CoordinateTable { labels, rows }),
        max_deviation,
        0,
        Vec::new(),
        None,
        verdicts,
    ))
}

/// Standardized canonical moments `scale(n) (U_j - ½I)`, `j <= k`, of uniform draws from `M_n`.
pub fn run_canonical_vector_clt(config: &ExperimentConfig) -> Result<Experiment> {
    expect_kind(config, ExperimentKind::CanonicalVector)?;
    let (field, p, n, k) = (config.field, config.p, config.n, config.k);
    let scale = CltConstants::scale(n, p, field) * config.scale_multiplier;
    let half = SymHermMatrix::scaled_identity(field, p, 0.5);
    let root = RngState::new(config.seed);
    let rows = map_indexed(config.samples, |i| -> Result<Vec<f64>> {
        let mut rng = root.substream(i as u64, purpose::CANONICAL_CLT).rng();
        let u = sample_uniform_canonical_prefix(n, k, p, field, &mut rng)?;
        Ok(u.values()
            .iter()
            .flat_map(|x| (x - &half).scale(scale).coordinates())
            .collect())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let labels = block_labels("U", k, field, p);
    let targets = block_targets(k, p, field);
    let summary = summarize(&labels, &targets, &rows)?;
    let t = config.thresholds();
    let mut verdicts = ks_verdicts(&summary, t.ks);
    let d = field.real_dimension(p);
    let cross = max_cov_deviation(&summary, |i, j| i / d != j / d);
    if k > 1 {
        verdicts.push(Verdict::below("max |cross-block cov|", cross, t.covariance));
    }
    let max_deviation = max_cov_deviation(&summary, |_, _| true);
    Ok(finish(
        config,
        Some(summary),
        Some(CoordinateTable { labels, rows }),
        max_deviation,
        0,
        Vec::new(),
        None,
        verdicts,
    ))
}

/// Finite-difference Jacobian of the inverse canonical map at the center against `A ⊗ I`.
pub fn run_jacobian_check(config: &ExperimentConfig) -> Result<Experiment> {
    expect_kind(config, ExperimentKind::JacobianCheck)?;
    let (field, p, k) = (config.field, config.p, config.k);
    let jac = numerical_jacobian_at_center(k, p, field, config.h)?;
    let expected = kron_identity(&clt_matrix_A(k), field.real_dimension(p));
    let max_deviation = (jac - expected).amax();
    let verdicts = vec![Verdict::below(
        "max |J - A (x) I|",
        max_deviation,
        config.thresholds().jacobian,
    )];
    Ok(finish(
        config,
        None,
        None,
        max_deviation,
        0,
        Vec::new(),
        None,
        verdicts,
    ))
}

const VOLUME_CHUNK: usize = 4096;

/// Rejection estimate of `vol(M_n)`: uniform points of the box with diagonal entries in `[0, 1]`
/// and off-diagonal real and imaginary parts in `[-½, ½]` (volume 1 per moment), counted when
/// interior.
pub fn run_volume_check(config: &ExperimentConfig) -> Result<Experiment> {
    expect_kind(config, ExperimentKind::VolumeCheck)?;
    let (field, p, n) = (config.field, config.p, config.n);
    let root = RngState::new(config.seed);
    let chunks = config.samples.div_ceil(VOLUME_CHUNK);
    let hits = map_indexed(chunks, |c| -> Result<u64> {
        let mut rng = root.substream(c as u64, purpose::VOLUME).rng();
        let len = VOLUME_CHUNK.min(config.samples - c * VOLUME_CHUNK);
        let mut hits = 0;
        for _ in 0..len {
            if is_interior(&box_point(field, p, n, &mut rng)?, Tolerance::default())? {
                hits += 1;
            }
        }
        Ok(hits)
    })
    .into_iter()
    .sum::<Result<u64>>()?;
    let exact = log_volume(n, p, field)?.exp();
    let samples = config.samples as f64;
    let estimate = hits as f64 / samples;
    let standard_error = (exact * (1.0 - exact) / samples).sqrt();
    let z = (estimate - exact).abs() / standard_error;
    let verdicts = vec![Verdict::below(
        "|estimate - exact| / standard error",
        z,
        config.thresholds().volume_sigmas,
    )];
    let volume = VolumeEstimate {
        hits,
        samples: config.samples,
        estimate,
        exact,
        standard_error,
        z,
    };
    Ok(finish(
        config,
        None,
        None,
        (estimate - exact).abs(),
        0,
        Vec::new(),
        Some(volume),
        verdicts,
    ))
}

fn box_point<R: Rng + ?Sized>(
    field: FieldCase,
    p: usize,
    n: usize,
    rng: &mut R,
) -> Result<MomentSequence> {
    let d = field.real_dimension(p);
    let moments = (0..n)
        .map(|_| {
            let coords: Vec<f64> = (0..d)
                .map(|i| {
                    let u: f64 = rng.random();
                    if i < p {
                        u
                    } else {
                        u - 0.5
                    }
                })
                .collect();
            SymHermMatrix::from_coordinates(field, p, &coords)
        })
        .collect::<Result<Vec<_>>>()?;
    MomentSequence::new(field, p, moments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn standardize_examples() {
        let half = SymHermMatrix::scaled_identity(FieldCase::Complex, 2, 0.5);
        assert_eq!(
            standardize_beta_sample(&half, 1.5, 10).frobenius_norm(),
            0.0
        );
        let x = SymHermMatrix::scaled_identity(FieldCase::Real, 1, 0.75);
        assert_eq!(standardize_beta_sample(&x, 1.0, 2).get(0, 0).re, 1.0);
        // γ = (p+1)/2 reproduces sqrt(4(p+1)n)
        let p = 3;
        let n = 17;
        let y = SymHermMatrix::scaled_identity(FieldCase::Real, p, 1.5);
        assert_relative_eq!(
            standardize_beta_sample(&y, beta_gamma(FieldCase::Real, p), n)
                .get(0, 0)
                .re,
            (4.0 * (p as f64 + 1.0) * n as f64).sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn l2_exact_matches_closed_form() {
        for p in 1..=4 {
            for &a in &[3.0, 75.0, 1200.0] {
                let closed = p as f64 / (8.0 * a + 4.0)
                    * (1.0 + (p as f64 - 1.0) * 2.0 * a / (4.0 * a - 1.0));
                assert_relative_eq!(
                    beta_l2_exact(FieldCase::Real, p, a).unwrap(),
                    closed,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn centered_moment_vector_is_zero() {
        let z =
            standardize_moment_vector(&MomentSequence::arcsine_center(FieldCase::Real, 2, 3), 400)
                .unwrap();
        assert!(z.iter().all(|m| m.frobenius_norm() == 0.0));
    }

    #[test]
    fn jacobian_experiment() {
        let c = ExperimentConfig::new(ExperimentKind::JacobianCheck, FieldCase::Real, 2, 3, 3);
        let e = run_experiment(&c).unwrap();
        assert!(e.report.pass, "{:?}", e.report.verdicts);
        assert!(e.table.is_none());
    }

    #[test]
    fn small_runs_are_reproducible() {
        let c = ExperimentConfig::new(ExperimentKind::MomentVector, FieldCase::Complex, 2, 50, 2)
            .with_samples(300)
            .with_seed(9);
        let a = serde_json::to_string(&run_experiment(&c).unwrap().report).unwrap();
        let b = serde_json::to_string(&run_experiment(&c).unwrap().report).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wrong_kind_rejected() {
        let c = ExperimentConfig::new(ExperimentKind::VolumeCheck, FieldCase::Real, 1, 2, 1);
        assert!(matches!(run_beta_clt(&c), Err(Error::Config(_))));
    }

    #[test]
    fn negative_control_fails() {
        let mut c =
            ExperimentConfig::new(ExperimentKind::BetaToGaussian, FieldCase::Real, 1, 100, 1)
                .with_samples(20_000);
        c.n_ladder = vec![];
        assert!(run_experiment(&c).unwrap().report.pass);
        c.scale_multiplier = 1.5;
        assert!(!run_experiment(&c).unwrap().report.pass);
    }

    #[test]
    fn box_points_cover_the_volume() {
        let c = ExperimentConfig::new(ExperimentKind::VolumeCheck, FieldCase::Complex, 2, 1, 1)
            .with_samples(200_000);
        let e = run_experiment(&c).unwrap();
        let v = e.report.volume.unwrap();
        assert_relative_eq!(v.exact, std::f64::consts::PI / 12.0, max_relative = 1e-12);
        assert!(e.report.pass, "{v:?}");
    }
}
