//! Random generators shared by the integration tests.

#![allow(dead_code)]

use matmoments::canonical::{oracle::discrete_measure_moments, CanonicalSequence};
use matmoments::linalg::{sym_sqrt, CMat, FieldCase, SymHermMatrix};
use matmoments::moment_space::MomentSequence;
use nalgebra::{Complex, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub const FIELDS: [FieldCase; 2] = [FieldCase::Real, FieldCase::Complex];

pub fn gaussian_matrix<R: Rng>(rng: &mut R, field: FieldCase, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = match field {
            FieldCase::Real => 0.0,
            FieldCase::Complex => rng.sample(StandardNormal),
        };
        Complex::new(re, im)
    })
}

/// Orthogonal or unitary factor of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, field: FieldCase, p: usize) -> CMat {
    gaussian_matrix(rng, field, p, p).qr().q()
}

/// `W diag(λ) W*` with a random `W` and the given eigenvalues.
pub fn with_spectrum<R: Rng>(rng: &mut R, field: FieldCase, lambda: &[f64]) -> SymHermMatrix {
    let p = lambda.len();
    let w = random_unitary(rng, field, p);
    let d = CMat::from_diagonal(&DVector::from_iterator(
        p,
        lambda.iter().map(|&l| Complex::new(l, 0.0)),
    ));
    let m = &w * d * w.adjoint();
    SymHermMatrix::new(field, hermitian_part(&m)).unwrap()
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * Complex::new(0.5, 0.0)
}

/// Canonical moments with eigenvalues drawn uniformly from `(lo, hi)`.
pub fn random_canonical<R: Rng>(
    rng: &mut R,
    field: FieldCase,
    p: usize,
    n: usize,
    lo: f64,
    hi: f64,
) -> CanonicalSequence {
    let values = (0..n)
        .map(|_| {
            let lambda: Vec<f64> = (0..p).map(|_| rng.random_range(lo..hi)).collect();
            with_spectrum(rng, field, &lambda)
        })
        .collect();
    CanonicalSequence::new(field, p, values).unwrap()
}

/// Random positive definite weights summing to `I`: `W_i = T^{-1/2} G_i T^{-1/2}` with
/// `G_i = A_i A_i* + εI` and `T = Σ G_i`.
pub fn random_weights<R: Rng>(
    rng: &mut R,
    field: FieldCase,
    p: usize,
    atoms: usize,
) -> Vec<SymHermMatrix> {
    let grams: Vec<SymHermMatrix> = (0..atoms)
        .map(|_| {
            let a = gaussian_matrix(rng, field, p, p);
            let g = &a * a.adjoint() + CMat::identity(p, p) * Complex::new(0.1, 0.0);
            SymHermMatrix::new(field, hermitian_part(&g)).unwrap()
        })
        .collect();
    let total = grams
        .iter()
        .fold(SymHermMatrix::zeros(field, p), |acc, g| &acc + g);
    let inv_sqrt = sym_sqrt(&total, true).unwrap();
    grams.iter().map(|g| g.congruence(&inv_sqrt)).collect()
}

/// `atoms` points in `(0, 1)`, one in each cell of a uniform grid, kept away from the cell edges.
pub fn separated_points<R: Rng>(rng: &mut R, atoms: usize) -> Vec<f64> {
    let width = 1.0 / atoms as f64;
    (0..atoms)
        .map(|i| width * (i as f64 + rng.random_range(0.2..0.8)))
        .collect()
}

/// Moments of a random discrete measure on `[0, 1]` with `atoms` atoms.
pub fn random_discrete<R: Rng>(
    rng: &mut R,
    field: FieldCase,
    p: usize,
    atoms: usize,
    k: usize,
) -> (Vec<f64>, Vec<SymHermMatrix>, MomentSequence) {
    let points = separated_points(rng, atoms);
    let weights = random_weights(rng, field, p, atoms);
    let s = discrete_measure_moments(&points, &weights, k).unwrap();
    (points, weights, s)
}

pub fn relative_matrix_error(a: &SymHermMatrix, b: &SymHermMatrix) -> f64 {
    (a - b).frobenius_norm()
        / a.frobenius_norm()
            .max(b.frobenius_norm())
            .max(f64::MIN_POSITIVE)
}
