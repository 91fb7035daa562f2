use nalgebra::Complex;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::BetaParams;
use crate::canonical::{canonical_to_moments, CanonicalSequence};
use crate::error::{Error, Result};
use crate::linalg::{
    loewner_interval_contains, sym_sqrt_with, CMat, FieldCase, SymHermMatrix, Tolerance,
};
use crate::moment_space::{canonical_beta_parameter, MomentSequence};

const MAX_RESAMPLES: usize = 10_000;

fn normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    z * variance.sqrt()
}

/// Real symmetric draw with density proportional to `exp(-tr X² / 2)`: diagonal `N(0, 1)`,
/// off-diagonal `N(0, 1/2)`.
pub fn sample_goe<R: Rng + ?Sized>(p: usize, rng: &mut R) -> SymHermMatrix {
    let mut m = CMat::zeros(p, p);
    for i in 0..p {
        m[(i, i)] = Complex::new(normal(rng, 1.0), 0.0);
        for j in (i + 1)..p {
            let x = Complex::new(normal(rng, 0.5), 0.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    SymHermMatrix::from_computed(FieldCase::Real, m)
}

/// Hermitian draw with density proportional to `exp(-tr X² / 2)`: diagonal `N(0, 1)`,
/// real and imaginary parts off the diagonal `N(0, 1/2)`.
pub fn sample_gue<R: Rng + ?Sized>(p: usize, rng: &mut R) -> SymHermMatrix {
    let mut m = CMat::zeros(p, p);
    for i in 0..p {
        m[(i, i)] = Complex::new(normal(rng, 1.0), 0.0);
        for j in (i + 1)..p {
            let re = normal(rng, 0.5);
            let im = normal(rng, 0.5);
            m[(i, j)] = Complex::new(re, im);
            m[(j, i)] = Complex::new(re, -im);
        }
    }
    SymHermMatrix::from_computed(FieldCase::Complex, m)
}

/// Wishart matrix with identity scale and mean `dof * I` by the Bartlett construction.
///
/// Real: `L_ii² ~ χ²_{dof-i+1}`, `L_ij ~ N(0, 1)`. Complex: `L_ii² ~ Gamma(dof-i+1, 1)`,
/// `L_ij` with independent `N(0, 1/2)` real and imaginary parts.
pub fn sample_wishart<R: Rng + ?Sized>(
    p: usize,
    dof: f64,
    field: FieldCase,
    rng: &mut R,
) -> Result<SymHermMatrix> {
    if p == 0 || !(dof > p as f64 - 1.0) || !dof.is_finite() {
        return Err(Error::Domain(format!(
            "Wishart needs dof > p - 1 (p={p}, dof={dof})"
        )));
    }
    let mut l = CMat::zeros(p, p);
    for i in 0..p {
        let remaining = dof - i as f64;
        let square = match field {
            FieldCase::Real => Gamma::new(remaining / 2.0, 2.0),
            FieldCase::Complex => Gamma::new(remaining, 1.0),
        }
        .map_err(|e| Error::Domain(e.to_string()))?
        .sample(rng);
        l[(i, i)] = Complex::new(square.sqrt(), 0.0);
        for j in 0..i {
            l[(i, j)] = match field {
                FieldCase::Real => Complex::new(normal(rng, 1.0), 0.0),
                FieldCase::Complex => Complex::new(normal(rng, 0.5), normal(rng, 0.5)),
            };
        }
    }
    Ok(SymHermMatrix::from_computed(field, &l * l.adjoint()))
}

/// Matrix Beta draw `X = (A+B)^{-1/2} A (A+B)^{-1/2}`.
pub fn sample_matrix_beta<R: Rng + ?Sized>(
    params: &BetaParams,
    rng: &mut R,
) -> Result<SymHermMatrix> {
    Ok(sample_matrix_beta_counted(params, rng)?.0)
}

/// As [`sample_matrix_beta`], also returning the number of degenerate draws that were rejected.
///
/// `A` and `B` are independent Wisharts with `2a`, `2b` degrees of freedom (real) or `a`, `b`
/// (complex). A draw is rejected when `A + B` is numerically singular or `X` is not strictly
/// inside `(0, I)`.
pub fn sample_matrix_beta_counted<R: Rng + ?Sized>(
    params: &BetaParams,
    rng: &mut R,
) -> Result<(SymHermMatrix, usize)> {
    let BetaParams { field, p, a, b } = *params;
    let (dof_a, dof_b) = match field {
        FieldCase::Real => (2.0 * a, 2.0 * b),
        FieldCase::Complex => (a, b),
    };
    let tol = Tolerance::default();
    for rejected in 0..MAX_RESAMPLES {
        let wa = sample_wishart(p, dof_a, field, rng)?;
        let wb = sample_wishart(p, dof_b, field, rng)?;
        let Ok(inv_sqrt) = sym_sqrt_with(&(&wa + &wb), true, tol) else {
            continue;
        };
        let x = wa.congruence(&inv_sqrt);
        if loewner_interval_contains(&x, tol)? {
            return Ok((x, rejected));
        }
    }
    Err(Error::Domain(format!(
        "no admissible matrix Beta draw in {MAX_RESAMPLES} attempts (a={a}, b={b})"
    )))
}

/// The first `k` canonical moments of a uniform draw from `M_n`: independent
/// `U_j ~ Beta_p(c, c)` with `c = (n-j+1)(p+1)/2` (real) or `c = p(n-j+1)` (complex).
pub fn sample_uniform_canonical_prefix<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    p: usize,
    field: FieldCase,
    rng: &mut R,
) -> Result<CanonicalSequence> {
    if n == 0 || p == 0 || k > n {
        return Err(Error::Domain(format!(
            "need n, p >= 1 and k <= n (n={n}, k={k}, p={p})"
        )));
    }
    let values = (1..=k)
        .map(|j| {
            let c = canonical_beta_parameter(n - j + 1, p, field);
            sample_matrix_beta(&BetaParams::new(field, p, c, c)?, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CanonicalSequence::new_unchecked(field, p, values))
}

/// A uniform draw from the moment space `M_n`.
pub fn sample_uniform_moment_space<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    field: FieldCase,
    rng: &mut R,
) -> Result<MomentSequence> {
    canonical_to_moments(&sample_uniform_canonical_prefix(n, n, p, field, rng)?)
}
