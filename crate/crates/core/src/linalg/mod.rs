//! Field-generic dense Hermitian matrices.
//!
//! Every matrix in the crate is a [`SymHermMatrix`]: a real symmetric or a complex Hermitian
//! matrix, stored as `DMatrix<Complex64>` (explicit real/imaginary pairs) and tagged with its
//! [`FieldCase`]. For the real field all imaginary parts are exactly zero, and the checked
//! constructors enforce exact (conjugate) symmetry.
//!
//! Positivity tests and square roots go through a full eigendecomposition so that every
//! Loewner-order decision uses the same relative eigenvalue floor ([`Tolerance`]).

mod special;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use special::{ln_gamma, log_multivariate_beta, log_multivariate_gamma};

pub type Complex64 = Complex<f64>;

/// Dense complex matrix; the working representation for both fields.
pub type CMat = DMatrix<Complex64>;

/// The scalar field of a matrix measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldCase {
    Real,
    Complex,
}

impl FieldCase {
    /// Dyson index: 1 for real symmetric, 2 for complex Hermitian matrices.
    pub fn beta_index(self) -> u32 {
        match self {
            FieldCase::Real => 1,
            FieldCase::Complex => 2,
        }
    }

    /// Number of independent real coordinates of a `p x p` matrix of this field.
    pub fn real_dimension(self, p: usize) -> usize {
        match self {
            FieldCase::Real => p * (p + 1) / 2,
            FieldCase::Complex => p * p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldCase::Real => "real",
            FieldCase::Complex => "complex",
        }
    }
}

impl fmt::Display for FieldCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FieldCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(FieldCase::Real),
            "complex" => Ok(FieldCase::Complex),
            other => Err(Error::Domain(format!("unknown field `{other}`"))),
        }
    }
}

/// Eigenvalue floors used by positivity and Loewner-order tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Floor relative to the spectral radius.
    pub rel: f64,
    /// Absolute floor.
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-10,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && abs > 0.0 && rel.is_finite() && abs.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerances must be positive and finite (rel={rel}, abs={abs})"
            )));
        }
        Ok(Tolerance { rel, abs })
    }

    /// The eigenvalue floor for a matrix with the given spectral radius.
    pub fn floor(&self, spectral_radius: f64) -> f64 {
        self.abs.max(self.rel * spectral_radius)
    }
}

/// A `p x p` real symmetric or complex Hermitian matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct SymHermMatrix {
    field: FieldCase,
    data: CMat,
}

impl fmt::Debug for SymHermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymHermMatrix<{}, {}>", self.field, self.p())?;
        for i in 0..self.p() {
            f.write_str("\n  [")?;
            for j in 0..self.p() {
                let z = self.data[(i, j)];
                match self.field {
                    FieldCase::Real => write!(f, " {:>12.6e}", z.re)?,
                    FieldCase::Complex => write!(f, " {:>12.6e}{:+.6e}i", z.re, z.im)?,
                }
            }
            f.write_str(" ]")?;
        }
        Ok(())
    }
}

impl SymHermMatrix {
    /// Checked constructor: the matrix must be square, finite, and (conjugate) symmetric up to
    /// rounding. The stored matrix is exactly symmetric/Hermitian.
    pub fn new(field: FieldCase, data: CMat) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::InvalidMatrix(format!(
                "expected a non-empty square matrix, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let scale = data.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let slack = 1e-12 * scale;
        let p = data.nrows();
        for i in 0..p {
            if data[(i, i)].im.abs() > slack {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry ({i},{i}) has imaginary part {}",
                    data[(i, i)].im
                )));
            }
            for j in (i + 1)..p {
                if (data[(i, j)] - data[(j, i)].conj()).norm() > slack {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) are not conjugate"
                    )));
                }
            }
        }
        if field == FieldCase::Real && data.iter().any(|z| z.im.abs() > slack) {
            return Err(Error::InvalidMatrix(
                "real-field matrix has imaginary entries".into(),
            ));
        }
        Ok(Self::from_computed(field, data))
    }

    /// Builds from the result of a computation that is Hermitian in exact arithmetic:
    /// replaces `data` by its Hermitian part and clears what the field forbids.
    pub(crate) fn from_computed(field: FieldCase, data: CMat) -> Self {
        let p = data.nrows();
        let mut out = CMat::zeros(p, p);
        for i in 0..p {
            out[(i, i)] = Complex::new(data[(i, i)].re, 0.0);
            for j in (i + 1)..p {
                let z = (data[(i, j)] + data[(j, i)].conj()) * 0.5;
                let z = match field {
                    FieldCase::Real => Complex::new(z.re, 0.0),
                    FieldCase::Complex => z,
                };
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        SymHermMatrix { field, data: out }
    }

    /// Real symmetric matrix from row-major entries.
    pub fn from_real_rows(p: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != p * p {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, got {}",
                p * p,
                rows.len()
            )));
        }
        let data = CMat::from_row_slice(
            p,
            p,
            &rows
                .iter()
                .map(|&x| Complex::new(x, 0.0))
                .collect::<Vec<_>>(),
        );
        Self::new(FieldCase::Real, data)
    }

    /// Matrix of the given field from row-major real and imaginary parts.
    pub fn from_parts(field: FieldCase, p: usize, re: &[f64], im: Option<&[f64]>) -> Result<Self> {
        if re.len() != p * p || im.is_some_and(|im| im.len() != p * p) {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries per part",
                p * p
            )));
        }
        let entries: Vec<Complex64> = (0..p * p)
            .map(|i| Complex::new(re[i], im.map_or(0.0, |im| im[i])))
            .collect();
        Self::new(field, CMat::from_row_slice(p, p, &entries))
    }

    pub fn identity(field: FieldCase, p: usize) -> Self {
        SymHermMatrix {
            field,
            data: CMat::identity(p, p),
        }
    }

    pub fn zeros(field: FieldCase, p: usize) -> Self {
        SymHermMatrix {
            field,
            data: CMat::zeros(p, p),
        }
    }

    pub fn scaled_identity(field: FieldCase, p: usize, c: f64) -> Self {
        SymHermMatrix {
            field,
            data: CMat::identity(p, p) * Complex::new(c, 0.0),
        }
    }

    pub fn from_diagonal(field: FieldCase, diag: &[f64]) -> Self {
        let p = diag.len();
        let mut data = CMat::zeros(p, p);
        for (i, &d) in diag.iter().enumerate() {
            data[(i, i)] = Complex::new(d, 0.0);
        }
        SymHermMatrix { field, data }
    }

    pub fn field(&self) -> FieldCase {
        self.field
    }

    pub fn p(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.data
    }

    pub fn into_matrix(self) -> CMat {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn scale(&self, c: f64) -> Self {
        SymHermMatrix {
            field: self.field,
            data: &self.data * Complex::new(c, 0.0),
        }
    }

    /// `W M W` for Hermitian `W`; stays in the same field.
    pub fn congruence(&self, w: &SymHermMatrix) -> Self {
        Self::from_computed(self.field, &w.data * &self.data * &w.data)
    }

    pub fn trace(&self) -> f64 {
        (0..self.p()).map(|i| self.data[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &SymHermMatrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The independent real coordinates: diagonal entries, then for `i < j` the real part
    /// (and for the complex field the imaginary part) of entry `(i, j)`.
    pub fn coordinates(&self) -> Vec<f64> {
        let p = self.p();
        let mut out = Vec::with_capacity(self.field.real_dimension(p));
        for i in 0..p {
            out.push(self.data[(i, i)].re);
        }
        for i in 0..p {
            for j in (i + 1)..p {
                out.push(self.data[(i, j)].re);
                if self.field == FieldCase::Complex {
                    out.push(self.data[(i, j)].im);
                }
            }
        }
        out
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(field: FieldCase, p: usize, coords: &[f64]) -> Result<Self> {
        if coords.len() != field.real_dimension(p) {
            return Err(Error::InvalidMatrix(format!(
                "expected {} coordinates, got {}",
                field.real_dimension(p),
                coords.len()
            )));
        }
        let mut data = CMat::zeros(p, p);
        let mut it = coords.iter().copied();
        for i in 0..p {
            data[(i, i)] = Complex::new(it.next().unwrap(), 0.0);
        }
        for i in 0..p {
            for j in (i + 1)..p {
                let re = it.next().unwrap();
                let im = match field {
                    FieldCase::Real => 0.0,
                    FieldCase::Complex => it.next().unwrap(),
                };
                data[(i, j)] = Complex::new(re, im);
                data[(j, i)] = Complex::new(re, -im);
            }
        }
        Ok(SymHermMatrix { field, data })
    }

    /// Labels matching [`coordinates`](Self::coordinates), e.g. `x11`, `re x12`.
    pub fn coordinate_labels(field: FieldCase, p: usize) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..p {
            out.push(format!("x{}{}", i + 1, i + 1));
        }
        for i in 0..p {
            for j in (i + 1)..p {
                match field {
                    FieldCase::Real => out.push(format!("x{}{}", i + 1, j + 1)),
                    FieldCase::Complex => {
                        out.push(format!("re x{}{}", i + 1, j + 1));
                        out.push(format!("im x{}{}", i + 1, j + 1));
                    }
                }
            }
        }
        out
    }

    fn check_compatible(&self, other: &SymHermMatrix) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.p(), other.p(), "dimension mismatch");
    }
}

impl Add for &SymHermMatrix {
    type Output = SymHermMatrix;

    fn add(self, rhs: &SymHermMatrix) -> SymHermMatrix {
        self.check_compatible(rhs);
        SymHermMatrix {
            field: self.field,
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &SymHermMatrix {
    type Output = SymHermMatrix;

    fn sub(self, rhs: &SymHermMatrix) -> SymHermMatrix {
        self.check_compatible(rhs);
        SymHermMatrix {
            field: self.field,
            data: &self.data - &rhs.data,
        }
    }
}

/// The product of two Hermitian matrices is not Hermitian in general.
impl Mul for &SymHermMatrix {
    type Output = CMat;

    fn mul(self, rhs: &SymHermMatrix) -> CMat {
        self.check_compatible(rhs);
        &self.data * &rhs.data
    }
}

/// Wire form of a matrix: `{"field", "p", "re", "im"}` with row-major parts.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldCase,
    pub p: usize,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl TryFrom<MatrixJson> for SymHermMatrix {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        if m.field == FieldCase::Real
            && m.im.as_ref().is_some_and(|im| im.iter().any(|&x| x != 0.0))
        {
            return Err(Error::InvalidMatrix(
                "real-field matrix carries a non-zero imaginary part".into(),
            ));
        }
        SymHermMatrix::from_parts(m.field, m.p, &m.re, m.im.as_deref())
    }
}

impl From<SymHermMatrix> for MatrixJson {
    fn from(m: SymHermMatrix) -> Self {
        let p = m.p();
        let mut re = Vec::with_capacity(p * p);
        let mut im = Vec::with_capacity(p * p);
        for i in 0..p {
            for j in 0..p {
                re.push(m.data[(i, j)].re);
                im.push(m.data[(i, j)].im);
            }
        }
        MatrixJson {
            field: m.field,
            p,
            re,
            im: (m.field == FieldCase::Complex).then_some(im),
        }
    }
}

/// Spectral decomposition `M = V diag(values) V*`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Eigen {
    /// `V diag(f(values)) V*`.
    pub fn reconstruct_with(&self, field: FieldCase, f: impl Fn(f64) -> f64) -> SymHermMatrix {
        let p = self.values.len();
        let mut scaled = self.vectors.clone();
        for (c, &lambda) in self.values.iter().enumerate() {
            let s = Complex::new(f(lambda), 0.0);
            for r in 0..p {
                scaled[(r, c)] *= s;
            }
        }
        SymHermMatrix::from_computed(field, &scaled * self.vectors.adjoint())
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()))
    }
}

/// Eigendecomposition of a symmetric/Hermitian matrix.
pub fn eig_sym(m: &SymHermMatrix) -> Result<Eigen> {
    if m.data
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let p = m.p();
    let (values, vectors): (Vec<f64>, CMat) = match m.field {
        FieldCase::Real => {
            let re = m.data.map(|z| z.re);
            let eig = SymmetricEigen::new(re);
            (
                eig.eigenvalues.iter().copied().collect(),
                eig.eigenvectors.map(|x| Complex::new(x, 0.0)),
            )
        }
        FieldCase::Complex => {
            let eig = SymmetricEigen::new(m.data.clone());
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMat::from_fn(p, p, |r, c| vectors[(r, order[c])]);
    Ok(Eigen {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(m: &SymHermMatrix) -> Result<Vec<f64>> {
    Ok(eig_sym(m)?.values)
}

/// `min eigenvalue > max(abs, rel * spectral radius)`.
pub fn is_positive_definite(m: &SymHermMatrix, tol: Tolerance) -> Result<bool> {
    let eig = eig_sym(m)?;
    Ok(eig.min() > tol.floor(eig.spectral_radius()))
}

/// `0 < M < I` in the Loewner order.
pub fn loewner_interval_contains(m: &SymHermMatrix, tol: Tolerance) -> Result<bool> {
    let complement = &SymHermMatrix::identity(m.field, m.p()) - m;
    Ok(is_positive_definite(m, tol)? && is_positive_definite(&complement, tol)?)
}

/// Principal square root of a positive semidefinite matrix (`inverse = false`) or its
/// inverse (`inverse = true`), using the default [`Tolerance`].
pub fn sym_sqrt(m: &SymHermMatrix, inverse: bool) -> Result<SymHermMatrix> {
    sym_sqrt_with(m, inverse, Tolerance::default())
}

pub fn sym_sqrt_with(m: &SymHermMatrix, inverse: bool, tol: Tolerance) -> Result<SymHermMatrix> {
    let eig = eig_sym(m)?;
    let floor = tol.floor(eig.spectral_radius());
    if inverse {
        if eig.min() <= floor {
            return Err(Error::SingularMatrix {
                min_eigenvalue: eig.min(),
                floor,
            });
        }
        Ok(eig.reconstruct_with(m.field, |x| 1.0 / x.sqrt()))
    } else {
        if eig.min() < -floor {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(eig.reconstruct_with(m.field, |x| x.max(0.0).sqrt()))
    }
}

/// `(M^{1/2}, M^{-1/2})` from a single eigendecomposition; `M` must be positive definite.
pub(crate) fn sqrt_and_inverse_sqrt(
    m: &SymHermMatrix,
    tol: Tolerance,
) -> Result<(SymHermMatrix, SymHermMatrix)> {
    let eig = eig_sym(m)?;
    let floor = tol.floor(eig.spectral_radius());
    if eig.min() <= floor {
        return Err(Error::SingularMatrix {
            min_eigenvalue: eig.min(),
            floor,
        });
    }
    Ok((
        eig.reconstruct_with(m.field, f64::sqrt),
        eig.reconstruct_with(m.field, |x| 1.0 / x.sqrt()),
    ))
}
