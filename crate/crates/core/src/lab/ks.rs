use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_KS_SAMPLES: usize = 100;

/// Centered Gaussian reference laws for standardized coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaussianTarget {
    N01,
    N0Half,
}

impl GaussianTarget {
    pub fn variance(self) -> f64 {
        match self {
            GaussianTarget::N01 => 1.0,
            GaussianTarget::N0Half => 0.5,
        }
    }

    pub fn from_variance(v: f64) -> Self {
        if v == 1.0 {
            GaussianTarget::N01
        } else {
            GaussianTarget::N0Half
        }
    }

    pub fn cdf(self, x: f64) -> f64 {
        0.5 * libm::erfc(-x / (2.0 * self.variance()).sqrt())
    }
}

/// `sup_x |F_n(x) - F(x)|` for the empirical CDF of `samples`.
pub fn ks_statistic(samples: &[f64], target: GaussianTarget) -> Result<f64> {
    if samples.len() < MIN_KS_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            need: MIN_KS_SAMPLES,
        });
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("NaN in KS sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = target.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(seed: u64, count: usize, sd: f64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
            .collect()
    }

    #[test]
    fn cdf_values() {
        assert_eq!(GaussianTarget::N01.cdf(0.0), 0.5);
        assert!((GaussianTarget::N01.cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-12);
        assert!(
            (GaussianTarget::N0Half.cdf(0.5f64.sqrt()) - GaussianTarget::N01.cdf(1.0)).abs()
                < 1e-15
        );
    }

    #[test]
    fn matching_samples_are_close() {
        assert!(ks_statistic(&normals(1, 10_000, 1.0), GaussianTarget::N01).unwrap() < 0.02);
        assert!(
            ks_statistic(&normals(2, 10_000, 0.5f64.sqrt()), GaussianTarget::N0Half).unwrap()
                < 0.02
        );
    }

    #[test]
    fn mismatches_are_detected() {
        assert!(ks_statistic(&vec![0.0; 200], GaussianTarget::N01).unwrap() >= 0.5);
        assert!(ks_statistic(&normals(3, 10_000, 1.0), GaussianTarget::N0Half).unwrap() > 0.05);
    }

    #[test]
    fn exact_small_case() {
        // 100 points at the quantiles (i + 0.5)/100 give distance 1/200
        let xs: Vec<f64> = (0..100)
            .map(|i| {
                let q = (i as f64 + 0.5) / 100.0;
                let (mut lo, mut hi) = (-10.0, 10.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if GaussianTarget::N01.cdf(mid) < q {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        assert!((ks_statistic(&xs, GaussianTarget::N01).unwrap() - 0.005).abs() < 1e-12);
    }

    #[test]
    fn too_few() {
        assert!(matches!(
            ks_statistic(&[0.0; 99], GaussianTarget::N01),
            Err(Error::TooFewSamples { got: 99, need: 100 })
        ));
    }
}
