//! Canonical moments: the bijection between interior points of `M_n` and sequences of matrices
//! strictly inside `(0, I)`, and its inverse through the ζ-recursion.

mod jacobian;
pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    loewner_interval_contains, sqrt_and_inverse_sqrt, CMat, FieldCase, SymHermMatrix, Tolerance,
};
use crate::moment_space::{check_sequence, relative_deviation, MomentSequence};

pub use jacobian::{kron_identity, numerical_jacobian_at_center};

/// Canonical moments `U_1, ..., U_n`, each strictly between `0` and `I` in the Loewner order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CanonicalJson", into = "CanonicalJson")]
pub struct CanonicalSequence {
    field: FieldCase,
    p: usize,
    values: Vec<SymHermMatrix>,
}

#[derive(Serialize, Deserialize)]
struct CanonicalJson {
    field: FieldCase,
    p: usize,
    n: usize,
    #[serde(rename = "U")]
    values: Vec<SymHermMatrix>,
}

impl TryFrom<CanonicalJson> for CanonicalSequence {
    type Error = Error;

    fn try_from(j: CanonicalJson) -> Result<Self> {
        check_sequence(j.field, j.p, &j.values, Some(j.n))?;
        CanonicalSequence::new(j.field, j.p, j.values)
    }
}

impl From<CanonicalSequence> for CanonicalJson {
    fn from(u: CanonicalSequence) -> Self {
        CanonicalJson {
            field: u.field,
            p: u.p,
            n: u.values.len(),
            values: u.values,
        }
    }
}

impl CanonicalSequence {
    /// Checked constructor: every `U_k` must lie strictly inside `(0, I)`.
    pub fn new(field: FieldCase, p: usize, values: Vec<SymHermMatrix>) -> Result<Self> {
        check_sequence(field, p, &values, None)?;
        for (i, u) in values.iter().enumerate() {
            if !loewner_interval_contains(u, Tolerance::default())? {
                return Err(Error::Domain(format!(
                    "canonical moment U_{} is not strictly inside (0, I)",
                    i + 1
                )));
            }
        }
        Ok(CanonicalSequence { field, p, values })
    }

    pub(crate) fn new_unchecked(field: FieldCase, p: usize, values: Vec<SymHermMatrix>) -> Self {
        CanonicalSequence { field, p, values }
    }

    /// `(½I, ..., ½I)`, the canonical moments of the arcsine center.
    pub fn center(field: FieldCase, p: usize, n: usize) -> Self {
        CanonicalSequence {
            field,
            p,
            values: vec![SymHermMatrix::scaled_identity(field, p, 0.5); n],
        }
    }

    pub fn field(&self) -> FieldCase {
        self.field
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[SymHermMatrix] {
        &self.values
    }

    pub fn into_values(self) -> Vec<SymHermMatrix> {
        self.values
    }

    /// `U_k` for `1 <= k <= n`.
    pub fn get(&self, k: usize) -> Result<&SymHermMatrix> {
        if k == 0 || k > self.n() {
            return Err(Error::Index {
                index: k,
                len: self.n(),
            });
        }
        Ok(&self.values[k - 1])
    }

    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k > self.n() {
            return Err(Error::Index {
                index: k,
                len: self.n(),
            });
        }
        Ok(CanonicalSequence {
            field: self.field,
            p: self.p,
            values: self.values[..k].to_vec(),
        })
    }

    pub fn max_relative_deviation(&self, other: &CanonicalSequence) -> f64 {
        relative_deviation(&self.values, &other.values)
    }
}

/// Non-symmetric canonical moments `Ū_k` and the products `ζ_1 = Ū_1`, `ζ_j = (I - Ū_{j-1}) Ū_j`.
#[derive(Clone, Debug)]
pub struct ZetaSequence {
    pub field: FieldCase,
    pub p: usize,
    pub u_bar: Vec<CMat>,
    pub zeta: Vec<CMat>,
}

/// Range widths `D_1 = I`, `D_{m+1} = D_m^{1/2} U_m (I - U_m) D_m^{1/2}`; `D_k = S_k^+ - S_k^-`.
#[derive(Clone, Debug)]
pub struct RangeWidths {
    pub d: Vec<SymHermMatrix>,
}

/// `U_k = D_k^{-1/2} (S_k - S_k^-) D_k^{-1/2}` with `D_k = S_k^+ - S_k^-`.
///
/// `S_k^-` is the G-array entry `G_{k,k}` evaluated with `ζ_k = 0`, built from the canonical
/// moments already recovered, and `D_k` follows from the width recursion. Both agree with the
/// Hankel Schur complements of [`crate::moment_space::extremal_moments`] in exact arithmetic.
/// An error `NotInterior { order: k }` means `U_k` is not strictly inside `(0, I)`.
pub fn moments_to_canonical(s: &MomentSequence) -> Result<CanonicalSequence> {
    moments_to_canonical_with(s, Tolerance::default())
}

pub fn moments_to_canonical_with(s: &MomentSequence, tol: Tolerance) -> Result<CanonicalSequence> {
    let (field, p) = (s.field(), s.p());
    let identity = CMat::identity(p, p);
    let zero = CMat::zeros(p, p);
    let mut values: Vec<SymHermMatrix> = Vec::with_capacity(s.n());
    let mut zeta: Vec<CMat> = Vec::with_capacity(s.n());
    let mut previous_u_bar: Option<CMat> = None;
    // column[i] = G_{i,k-1} for i = 0..k-1
    let mut column: Vec<CMat> = vec![identity.clone()];
    let mut width = Width::identity(field, p);
    for k in 1..=s.n() {
        if k > 1 {
            width = width.next(&values[k - 2], k)?;
        }
        let lower = g_column(&column, &zeta, &zero);
        let s_minus = SymHermMatrix::from_computed(field, lower[k].clone());
        let u = (&s.moments()[k - 1] - &s_minus).congruence(&width.inv_sqrt);
        if !loewner_interval_contains(&u, tol)? {
            return Err(Error::NotInterior { order: k });
        }
        let u_bar = width.inv_sqrt.as_matrix() * u.as_matrix() * width.sqrt.as_matrix();
        let zk = match &previous_u_bar {
            None => u_bar.clone(),
            Some(prev) => (&identity - prev) * &u_bar,
        };
        column = g_column(&column, &zeta, &zk);
        zeta.push(zk);
        previous_u_bar = Some(u_bar);
        values.push(u);
    }
    Ok(CanonicalSequence { field, p, values })
}

/// Column `k` of the G-array from column `k-1` (`G_{i,k-1}`, `i < k`), the known `ζ_1..ζ_{k-1}`
/// and a value for `ζ_k`.
fn g_column(prev: &[CMat], zeta: &[CMat], zk: &CMat) -> Vec<CMat> {
    let k = prev.len();
    let mut col = Vec::with_capacity(k + 1);
    col.push(prev[0].clone());
    for i in 1..=k {
        let left = if i < k {
            prev[i].clone()
        } else {
            CMat::zeros(zk.nrows(), zk.ncols())
        };
        let z = if i == 1 { zk } else { &zeta[k - i] };
        col.push(left + z * &col[i - 1]);
    }
    col
}

/// `D_1, ..., D_n` from the canonical moments.
pub fn range_widths(u: &CanonicalSequence) -> Result<RangeWidths> {
    Ok(RangeWidths {
        d: widths_and_roots(u)?.into_iter().map(|w| w.d).collect(),
    })
}

struct Width {
    d: SymHermMatrix,
    sqrt: SymHermMatrix,
    inv_sqrt: SymHermMatrix,
}

impl Width {
    fn identity(field: FieldCase, p: usize) -> Self {
        let identity = SymHermMatrix::identity(field, p);
        Width {
            d: identity.clone(),
            sqrt: identity.clone(),
            inv_sqrt: identity,
        }
    }

    /// `D_k` from `D_{k-1}` and `U_{k-1}`.
    fn next(&self, u_prev: &SymHermMatrix, k: usize) -> Result<Self> {
        let (field, p) = (u_prev.field(), u_prev.p());
        let complement = &SymHermMatrix::identity(field, p) - u_prev;
        let uv = SymHermMatrix::from_computed(field, u_prev.as_matrix() * complement.as_matrix());
        let d = uv.congruence(&self.sqrt);
        let (sqrt, inv_sqrt) = sqrt_and_inverse_sqrt(&d, Tolerance::default())
            .map_err(|_| Error::SingularRange { k })?;
        Ok(Width { d, sqrt, inv_sqrt })
    }
}

fn widths_and_roots(u: &CanonicalSequence) -> Result<Vec<Width>> {
    let mut out: Vec<Width> = Vec::with_capacity(u.n());
    for m in 0..u.n() {
        let width = match out.last() {
            None => Width::identity(u.field, u.p),
            Some(prev) => prev.next(&u.values[m - 1], m + 1)?,
        };
        out.push(width);
    }
    Ok(out)
}

/// `Ū_k = D_k^{-1/2} U_k D_k^{1/2}` and the ζ-sequence.
pub fn nonsymmetric_canonical(u: &CanonicalSequence) -> Result<ZetaSequence> {
    let widths = widths_and_roots(u)?;
    let identity = CMat::identity(u.p, u.p);
    let u_bar: Vec<CMat> = u
        .values
        .iter()
        .zip(&widths)
        .map(|(uk, w)| w.inv_sqrt.as_matrix() * uk.as_matrix() * w.sqrt.as_matrix())
        .collect();
    let zeta = u_bar
        .iter()
        .enumerate()
        .map(|(j, ub)| match j {
            0 => ub.clone(),
            _ => (&identity - &u_bar[j - 1]) * ub,
        })
        .collect();
    Ok(ZetaSequence {
        field: u.field,
        p: u.p,
        u_bar,
        zeta,
    })
}

/// `S_1, ..., S_n` from the canonical moments via the G-array
/// `G_{i,j} = G_{i,j-1} + ζ_{j-i+1} G_{i-1,j}`, `G_{0,j} = I`, `G_{i,j} = 0` for `i > j`,
/// `S_k = G_{k,k}`.
pub fn canonical_to_moments(u: &CanonicalSequence) -> Result<MomentSequence> {
    let zeta = nonsymmetric_canonical(u)?;
    MomentSequence::new(u.field, u.p, g_array(&zeta))
}

pub(crate) fn g_array(z: &ZetaSequence) -> Vec<SymHermMatrix> {
    let (p, n) = (z.p, z.zeta.len());
    // prev[j] holds G_{i-1,j}; row i = 0 is all identities
    let mut prev: Vec<CMat> = vec![CMat::identity(p, p); n + 1];
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row: Vec<CMat> = vec![CMat::zeros(p, p); n + 1];
        for j in i..=n {
            let left = if j > i {
                row[j - 1].clone()
            } else {
                CMat::zeros(p, p)
            };
            row[j] = left + &z.zeta[j - i] * &prev[j];
        }
        out.push(SymHermMatrix::from_computed(z.field, row[i].clone()));
        prev = row;
    }
    out
}

/// The truncated block Jacobi operator of `N` block rows: identity blocks above the diagonal,
/// zero diagonal, `ζ_i^*` at block `(i, i-1)`.
pub fn block_jacobi_operator(z: &ZetaSequence, big_n: usize) -> Result<CMat> {
    let p = z.p;
    if big_n == 0 || big_n > z.zeta.len() + 1 {
        return Err(Error::Index {
            index: big_n,
            len: z.zeta.len() + 1,
        });
    }
    let mut j = CMat::zeros(big_n * p, big_n * p);
    for i in 0..big_n {
        if i + 1 < big_n {
            j.view_mut((i * p, (i + 1) * p), (p, p))
                .copy_from(&CMat::identity(p, p));
        }
        if i > 0 {
            j.view_mut((i * p, (i - 1) * p), (p, p))
                .copy_from(&z.zeta[i - 1].adjoint());
        }
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::linalg::eig_sym;
    use crate::moment_space::extremal_moments;

    fn scalar_u(values: &[f64]) -> CanonicalSequence {
        CanonicalSequence::new(
            FieldCase::Real,
            1,
            values
                .iter()
                .map(|&u| SymHermMatrix::scaled_identity(FieldCase::Real, 1, u))
                .collect(),
        )
        .unwrap()
    }

    /// `W diag(λ) W*` with `λ ∈ (0.05, 0.95)` and `W` from a Gram-Schmidt of a random matrix.
    pub(crate) fn random_canonical(
        rng: &mut ChaCha8Rng,
        field: FieldCase,
        p: usize,
        n: usize,
    ) -> CanonicalSequence {
        let values = (0..n)
            .map(|_| {
                let raw = CMat::from_fn(p, p, |_, _| {
                    let im = match field {
                        FieldCase::Real => 0.0,
                        FieldCase::Complex => rng.random::<f64>() - 0.5,
                    };
                    Complex::new(rng.random::<f64>() - 0.5, im)
                });
                let q = raw.qr().q();
                let lambda: Vec<f64> = (0..p).map(|_| rng.random_range(0.05..0.95)).collect();
                let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                    p,
                    lambda.iter().map(|&l| Complex::new(l, 0.0)),
                ));
                SymHermMatrix::from_computed(field, &q * d * q.adjoint())
            })
            .collect();
        CanonicalSequence::new(field, p, values).unwrap()
    }

    #[test]
    fn arcsine_maps_to_center() {
        let s = MomentSequence::scalar(FieldCase::Real, &[0.5, 0.375, 0.3125]);
        let u = moments_to_canonical(&s).unwrap();
        for v in u.values() {
            assert_relative_eq!(v.get(0, 0).re, 0.5, max_relative = 1e-14);
        }
    }

    #[test]
    fn forward_examples() {
        let half = SymHermMatrix::scaled_identity(FieldCase::Real, 2, 0.5);
        let s = MomentSequence::new(FieldCase::Real, 2, vec![half.clone()]).unwrap();
        assert!(moments_to_canonical(&s).unwrap().values()[0].max_abs_diff(&half) < 1e-15);

        let u =
            moments_to_canonical(&MomentSequence::scalar(FieldCase::Real, &[0.6, 0.4])).unwrap();
        assert_relative_eq!(u.values()[0].get(0, 0).re, 0.6, max_relative = 1e-14);
        assert_relative_eq!(u.values()[1].get(0, 0).re, 1.0 / 6.0, max_relative = 1e-13);
    }

    #[test]
    fn forward_rejects_boundary() {
        let s = MomentSequence::scalar(FieldCase::Real, &[0.5, 0.25]);
        assert!(matches!(
            moments_to_canonical(&s),
            Err(Error::NotInterior { order: 2 })
        ));
        let s = MomentSequence::scalar(FieldCase::Real, &[1.0, 1.0]);
        assert!(moments_to_canonical(&s).is_err());
    }

    #[test]
    fn zeta_examples() {
        for field in [FieldCase::Real, FieldCase::Complex] {
            let z = nonsymmetric_canonical(&CanonicalSequence::center(field, 3, 4)).unwrap();
            assert!(
                (&z.zeta[0]
                    - SymHermMatrix::scaled_identity(FieldCase::Real, 3, 0.5).into_matrix())
                .norm()
                    < 1e-15
            );
            for zj in &z.zeta[1..] {
                assert!(
                    (zj - SymHermMatrix::scaled_identity(FieldCase::Real, 3, 0.25).into_matrix())
                        .norm()
                        < 1e-15
                );
            }
        }

        let z = nonsymmetric_canonical(&scalar_u(&[0.3, 0.8, 0.4])).unwrap();
        let expected = [0.3, 0.7 * 0.8, 0.2 * 0.4];
        for (zj, e) in z.zeta.iter().zip(expected) {
            assert_relative_eq!(zj[(0, 0)].re, e, max_relative = 1e-14);
        }

        let u1 = SymHermMatrix::from_diagonal(FieldCase::Real, &[0.3, 0.7]);
        let u2 = SymHermMatrix::scaled_identity(FieldCase::Real, 2, 0.5);
        let u = CanonicalSequence::new(FieldCase::Real, 2, vec![u1.clone(), u2]).unwrap();
        let z = nonsymmetric_canonical(&u).unwrap();
        assert!((&z.u_bar[0] - u1.as_matrix()).norm() < 1e-15);
        let expected = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex::new(0.35, 0.0),
            Complex::new(0.15, 0.0),
        ]));
        assert!((&z.zeta[1] - expected).norm() < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        let u = scalar_u(&[0.35]);
        let s = canonical_to_moments(&u).unwrap();
        assert_eq!(s.moments()[0].get(0, 0).re, 0.35);

        let (u1, u2) = (0.3, 0.8);
        let s = canonical_to_moments(&scalar_u(&[u1, u2])).unwrap();
        assert_relative_eq!(
            s.moments()[1].get(0, 0).re,
            u1 * u1 + u1 * (1.0 - u1) * u2,
            max_relative = 1e-14
        );

        for field in [FieldCase::Real, FieldCase::Complex] {
            let s = canonical_to_moments(&CanonicalSequence::center(field, 2, 3)).unwrap();
            for (m, e) in s.moments().iter().zip([0.5, 0.375, 0.3125]) {
                assert!(m.max_abs_diff(&SymHermMatrix::scaled_identity(field, 2, e)) < 1e-15);
            }
        }
    }

    #[test]
    fn round_trips_and_range_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in [FieldCase::Real, FieldCase::Complex] {
            for p in 1..=3 {
                for n in 1..=7 {
                    let u = random_canonical(&mut rng, field, p, n);
                    let s = canonical_to_moments(&u).unwrap();
                    let back = moments_to_canonical(&s).unwrap();
                    assert!(u.max_relative_deviation(&back) < 1e-9);
                    let again = canonical_to_moments(&back).unwrap();
                    assert!(s.max_relative_deviation(&again) < 1e-9);

                    let widths = range_widths(&u).unwrap();
                    for k in 1..=n {
                        let pair = extremal_moments(&s, k).unwrap();
                        let lo = &pair.lower;
                        assert!(pair.width().max_abs_diff(&widths.d[k - 1]) < 1e-9);
                        let sk = &s.moments()[k - 1];
                        assert!(eig_sym(&(sk - lo)).unwrap().min() > 0.0);
                        assert!(eig_sym(&(&pair.upper - sk)).unwrap().min() > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn widths_at_center() {
        let w = range_widths(&CanonicalSequence::center(FieldCase::Complex, 2, 5)).unwrap();
        for (m, d) in w.d.iter().enumerate() {
            let e = 4f64.powi(-(m as i32));
            assert!(
                d.max_abs_diff(&SymHermMatrix::scaled_identity(FieldCase::Complex, 2, e)) < 1e-15
            );
        }
    }

    #[test]
    fn jacobi_operator_shape() {
        let z = nonsymmetric_canonical(&scalar_u(&[0.3, 0.6])).unwrap();
        let j1 = block_jacobi_operator(&z, 1).unwrap();
        assert_eq!(j1.shape(), (1, 1));
        assert_eq!(j1[(0, 0)].re, 0.0);
        let j2 = block_jacobi_operator(&z, 2).unwrap();
        assert_eq!(j2[(0, 1)].re, 1.0);
        assert_eq!(j2[(1, 0)].re, 0.3);
        assert_eq!(j2[(0, 0)].re, 0.0);
        assert!(block_jacobi_operator(&z, 4).is_err());
    }

    #[test]
    fn jacobi_operator_powers_give_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_canonical(&mut rng, FieldCase::Complex, 2, 6);
        let s = canonical_to_moments(&u).unwrap();
        let z = nonsymmetric_canonical(&u).unwrap();
        let j = block_jacobi_operator(&z, 7).unwrap();
        let mut power = CMat::identity(14, 14);
        for n in 1..=6 {
            power = &power * &j * &j;
            let corner = power.view((0, 0), (2, 2)).into_owned();
            assert!((&corner - s.moments()[n - 1].as_matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn arcsine_jacobi_spectrum_is_chebyshev() {
        let big_n = 8;
        let z =
            nonsymmetric_canonical(&CanonicalSequence::center(FieldCase::Real, 1, big_n)).unwrap();
        // symmetrize: off-diagonal sqrt(ζ_i)
        let j = block_jacobi_operator(&z, big_n).unwrap();
        let sym =
            nalgebra::DMatrix::from_fn(big_n, big_n, |r, c| (j[(r, c)].re * j[(c, r)].re).sqrt());
        let mut eig: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let mut cheb: Vec<f64> = (0..big_n)
            .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * big_n) as f64).cos())
            .collect();
        cheb.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&cheb) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn json_uses_u_key() {
        let u = CanonicalSequence::center(FieldCase::Real, 1, 2);
        let text = serde_json::to_string(&u).unwrap();
        assert!(text.contains(r#""n":2,"U":["#));
        let back: CanonicalSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
        let bad = text.replace("0.5", "1.0");
        assert!(serde_json::from_str::<CanonicalSequence>(&bad).is_err());
    }
}
