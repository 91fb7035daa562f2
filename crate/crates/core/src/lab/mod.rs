//! Monte Carlo experiments for the limit theorems, with reports built on Kolmogorov-Smirnov
//! distances.

mod experiments;
mod ks;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::FieldCase;

pub use experiments::{
    beta_l2_exact, run_beta_clt, run_canonical_vector_clt, run_experiment, run_jacobian_check,
    run_moment_vector_clt, run_volume_check, standardize_beta_sample, Experiment,
};
pub use ks::{ks_statistic, GaussianTarget, MIN_KS_SAMPLES};

/// Which limit statement an experiment exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(alias = "beta-to-gaussian")]
    BetaToGaussian,
    #[serde(alias = "canonical-vector")]
    CanonicalVector,
    #[serde(alias = "moment-vector")]
    MomentVector,
    #[serde(alias = "jacobian-check")]
    JacobianCheck,
    #[serde(alias = "volume-check")]
    VolumeCheck,
}

/// Pass/fail thresholds; unset entries take the per-kind defaults of [`Thresholds::for_kind`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2_relative: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume_sigmas: Option<f64>,
}

/// Thresholds with every entry resolved.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedThresholds {
    pub ks: f64,
    pub covariance: f64,
    pub l2_relative: f64,
    pub jacobian: f64,
    pub volume_sigmas: f64,
}

impl Thresholds {
    /// KS: 0.02 for the Beta and canonical experiments, 0.03 for the moment vector.
    /// Covariance: 0.1 for the moment vector, 0.05 for cross-block covariance of canonical
    /// moments. L² ladder: 20% relative. Jacobian: 1e-5. Volume: 3 standard errors.
    pub fn for_kind(&self, kind: ExperimentKind) -> ResolvedThresholds {
        let (ks, covariance) = match kind {
            ExperimentKind::MomentVector => (0.03, 0.1),
            ExperimentKind::CanonicalVector => (0.02, 0.05),
            _ => (0.02, 0.1),
        };
        ResolvedThresholds {
            ks: self.ks.unwrap_or(ks),
            covariance: self.covariance.unwrap_or(covariance),
            l2_relative: self.l2_relative.unwrap_or(0.2),
            jacobian: self.jacobian.unwrap_or(1e-5),
            volume_sigmas: self.volume_sigmas.unwrap_or(3.0),
        }
    }
}

fn default_ladder() -> Vec<usize> {
    vec![50, 200, 800]
}

fn default_one() -> f64 {
    1.0
}

fn default_h() -> f64 {
    1e-5
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

/// One experiment, as read from a JSON config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_field")]
    pub field: FieldCase,
    pub p: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Thresholds,
    #[serde(default = "default_ladder")]
    pub n_ladder: Vec<usize>,
    /// Multiplies the standardizing scale; anything but 1 is a negative control.
    #[serde(default = "default_one", skip_serializing_if = "is_one")]
    pub scale_multiplier: f64,
    #[serde(default = "default_h")]
    pub h: f64,
}

fn default_field() -> FieldCase {
    FieldCase::Real
}

fn default_n() -> usize {
    1
}

fn default_k() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, field: FieldCase, p: usize, n: usize, k: usize) -> Self {
        ExperimentConfig {
            kind,
            field,
            p,
            n,
            k,
            samples: 10_000,
            seed: 0,
            tolerances: Thresholds::default(),
            n_ladder: default_ladder(),
            scale_multiplier: 1.0,
            h: default_h(),
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn thresholds(&self) -> ResolvedThresholds {
        self.tolerances.for_kind(self.kind)
    }

    /// Checks the invariants `p >= 1`, `1 <= k <= n` and, for sampling experiments,
    /// `samples >= 100`.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.p == 0 || self.n == 0 {
            return fail(format!("need p, n >= 1 (p={}, n={})", self.p, self.n));
        }
        if self.k == 0 || self.k > self.n {
            return fail(format!("need 1 <= k <= n (k={}, n={})", self.k, self.n));
        }
        if self.kind != ExperimentKind::JacobianCheck && self.samples < MIN_KS_SAMPLES {
            return fail(format!(
                "need at least {MIN_KS_SAMPLES} samples, got {}",
                self.samples
            ));
        }
        if !(self.scale_multiplier.is_finite() && self.scale_multiplier > 0.0) {
            return fail(format!(
                "scale_multiplier must be positive, got {}",
                self.scale_multiplier
            ));
        }
        if self.kind == ExperimentKind::BetaToGaussian && self.n_ladder.contains(&0) {
            return fail("n_ladder entries must be positive".into());
        }
        let t = self.thresholds();
        if [
            t.ks,
            t.covariance,
            t.l2_relative,
            t.jacobian,
            t.volume_sigmas,
        ]
        .iter()
        .any(|x| !(x.is_finite() && *x > 0.0))
        {
            return fail("thresholds must be positive and finite".into());
        }
        Ok(())
    }
}

/// Empirical summary of one standardized real coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateStat {
    pub label: String,
    pub target_variance: f64,
    pub mean: f64,
    pub variance: f64,
    pub ks: f64,
}

/// `E‖X - ½I‖²` at one rung of the ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub n: usize,
    pub a: f64,
    pub empirical: f64,
    pub exact: f64,
    pub relative_error: f64,
}

/// Rejection-sampling estimate of a moment-space volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub hits: u64,
    pub samples: usize,
    pub estimate: f64,
    pub exact: f64,
    /// `sqrt(v (1 - v) / samples)` at the exact volume `v`.
    pub standard_error: f64,
    pub z: f64,
}

/// A named check of the form `value < threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn below(criterion: impl Into<String>, value: f64, threshold: f64) -> Self {
        Verdict {
            criterion: criterion.into(),
            value,
            threshold,
            pass: value < threshold,
        }
    }
}

/// Everything an experiment measured, with verdicts that follow from the recorded numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub config: ExperimentConfig,
    pub thresholds: ResolvedThresholds,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<CoordinateStat>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mean: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub covariance: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target_covariance: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<LadderPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<VolumeEstimate>,
    pub max_deviation: f64,
    /// Degenerate matrix Beta draws that were resampled.
    #[serde(default)]
    pub resampled: usize,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

/// Raw standardized coordinates, one row per sample.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateTable {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CoordinateTable {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", self.labels.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_aliases() {
        let c: ExperimentConfig =
            serde_json::from_str(r#"{"kind":"jacobian-check","p":2,"n":3,"k":3}"#).unwrap();
        assert_eq!(c.kind, ExperimentKind::JacobianCheck);
        assert_eq!(c.h, 1e-5);
        assert_eq!(c.n_ladder, vec![50, 200, 800]);
        c.validate().unwrap();
        let c: ExperimentConfig =
            serde_json::from_str(r#"{"kind":"MomentVector","p":2,"n":400,"k":3,"samples":100}"#)
                .unwrap();
        assert_eq!(c.thresholds().ks, 0.03);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"kind":"X","p":1}"#).is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"kind":"VolumeCheck","p":1,"bogus":1}"#
        )
        .is_err());
    }

    #[test]
    fn validation() {
        let base = ExperimentConfig::new(ExperimentKind::MomentVector, FieldCase::Real, 2, 10, 3);
        assert!(base.validate().is_ok());
        let mut c = base.clone();
        c.k = 11;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = base.clone();
        c.samples = 99;
        assert!(c.validate().is_err());
        let mut c = base;
        c.tolerances.ks = Some(-1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn csv_layout() {
        let t = CoordinateTable {
            labels: vec!["a".into(), "b".into()],
            rows: vec![vec![1.0, -0.5]],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1e0,-5e-1\n");
    }
}
