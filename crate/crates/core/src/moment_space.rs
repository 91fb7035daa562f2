//! Geometry of the moment space `M_n` of normalized `p x p` matrix measures on `[0, 1]`.
//!
//! A point of `M_n` is a [`MomentSequence`] `(S_1, ..., S_n)`; the zeroth moment `S_0 = I_p` is
//! implicit and only injected when the block Hankel matrices are assembled. The two families of
//! Hankel matrices are nested: `H_k` is `H_{k-2}` bordered by one block row and column whose
//! corner is `S_k` (lower family) or `S_{k-1} - S_k` (upper family). The Schur complements of
//! those borders give the extremal moments `S_k^-` and `S_k^+`.

use nalgebra::{Cholesky, Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    is_positive_definite, log_multivariate_beta, CMat, FieldCase, SymHermMatrix, Tolerance,
};

/// Moments `S_1, ..., S_n` of a matrix measure on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceJson", into = "SequenceJson")]
pub struct MomentSequence {
    field: FieldCase,
    p: usize,
    moments: Vec<SymHermMatrix>,
}

/// Wire form shared by moment and canonical sequences; `values` is keyed `S` or `U`.
#[derive(Serialize, Deserialize)]
pub(crate) struct SequenceJson {
    pub field: FieldCase,
    pub p: usize,
    pub n: usize,
    #[serde(rename = "S")]
    pub values: Vec<SymHermMatrix>,
}

pub(crate) fn check_sequence(
    field: FieldCase,
    p: usize,
    values: &[SymHermMatrix],
    declared_n: Option<usize>,
) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidMatrix("dimension p must be positive".into()));
    }
    if let Some(n) = declared_n {
        if n != values.len() {
            return Err(Error::InvalidMatrix(format!(
                "declared n={n} but {} matrices given",
                values.len()
            )));
        }
    }
    for (i, m) in values.iter().enumerate() {
        if m.field() != field || m.p() != p {
            return Err(Error::InvalidMatrix(format!(
                "entry {} is {} {}x{}, expected {field} {p}x{p}",
                i + 1,
                m.field(),
                m.p(),
                m.p()
            )));
        }
    }
    Ok(())
}

impl TryFrom<SequenceJson> for MomentSequence {
    type Error = Error;

    fn try_from(j: SequenceJson) -> Result<Self> {
        check_sequence(j.field, j.p, &j.values, Some(j.n))?;
        Ok(MomentSequence {
            field: j.field,
            p: j.p,
            moments: j.values,
        })
    }
}

impl From<MomentSequence> for SequenceJson {
    fn from(s: MomentSequence) -> Self {
        SequenceJson {
            field: s.field,
            p: s.p,
            n: s.moments.len(),
            values: s.moments,
        }
    }
}

impl MomentSequence {
    pub fn new(field: FieldCase, p: usize, moments: Vec<SymHermMatrix>) -> Result<Self> {
        check_sequence(field, p, &moments, None)?;
        Ok(MomentSequence { field, p, moments })
    }

    /// `(s_1^0 I_p, ..., s_n^0 I_p)`, the moments of the matrix arcsine measure.
    pub fn arcsine_center(field: FieldCase, p: usize, n: usize) -> Self {
        let moments = arcsine_moments(n)
            .into_iter()
            .map(|s| SymHermMatrix::scaled_identity(field, p, s))
            .collect();
        MomentSequence { field, p, moments }
    }

    /// Scalar moment sequence (`p = 1`).
    pub fn scalar(field: FieldCase, values: &[f64]) -> Self {
        MomentSequence {
            field,
            p: 1,
            moments: values
                .iter()
                .map(|&s| SymHermMatrix::scaled_identity(field, 1, s))
                .collect(),
        }
    }

    pub fn field(&self) -> FieldCase {
        self.field
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.moments.len()
    }

    pub fn moments(&self) -> &[SymHermMatrix] {
        &self.moments
    }

    pub fn into_moments(self) -> Vec<SymHermMatrix> {
        self.moments
    }

    /// `S_k` for `1 <= k <= n`.
    pub fn get(&self, k: usize) -> Result<&SymHermMatrix> {
        if k == 0 || k > self.n() {
            return Err(Error::Index {
                index: k,
                len: self.n(),
            });
        }
        Ok(&self.moments[k - 1])
    }

    /// The first `k` moments.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k > self.n() {
            return Err(Error::Index {
                index: k,
                len: self.n(),
            });
        }
        Ok(MomentSequence {
            field: self.field,
            p: self.p,
            moments: self.moments[..k].to_vec(),
        })
    }

    /// `S_j` with the implicit `S_0 = I_p`; `j <= n`.
    fn raw(&self, j: usize) -> CMat {
        if j == 0 {
            CMat::identity(self.p, self.p)
        } else {
            self.moments[j - 1].as_matrix().clone()
        }
    }

    /// Largest relative Frobenius deviation `max_k ||S_k - T_k|| / ||S_k||`.
    pub fn max_relative_deviation(&self, other: &MomentSequence) -> f64 {
        relative_deviation(&self.moments, &other.moments)
    }
}

pub(crate) fn relative_deviation(a: &[SymHermMatrix], b: &[SymHermMatrix]) -> f64 {
    assert_eq!(a.len(), b.len(), "sequence length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).frobenius_norm() / x.frobenius_norm().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// Assembles a Hermitian block matrix from a block generator.
pub(crate) fn assemble_blocks(
    blocks: usize,
    p: usize,
    block: impl Fn(usize, usize) -> CMat,
) -> CMat {
    let mut out = CMat::zeros(blocks * p, blocks * p);
    for r in 0..blocks {
        for c in 0..blocks {
            out.view_mut((r * p, c * p), (p, p)).copy_from(&block(r, c));
        }
    }
    out
}

/// Block order of the lower Hankel matrix of order `m` and the index offset of its entries.
fn lower_layout(m: usize) -> (usize, usize) {
    (m / 2 + 1, m % 2)
}

/// Block order of the upper Hankel matrix of order `m` and the index offset of its entries.
fn upper_layout(m: usize) -> (usize, usize) {
    (m.div_ceil(2), 1 - m % 2)
}

fn lower_block(s: &MomentSequence, m: usize, r: usize, c: usize) -> CMat {
    let (_, offset) = lower_layout(m);
    s.raw(r + c + offset)
}

fn upper_block(s: &MomentSequence, m: usize, r: usize, c: usize) -> CMat {
    let (_, offset) = upper_layout(m);
    s.raw(r + c + offset) - s.raw(r + c + offset + 1)
}

fn lower_hankel_raw(s: &MomentSequence, m: usize) -> CMat {
    let (blocks, _) = lower_layout(m);
    assemble_blocks(blocks, s.p, |r, c| lower_block(s, m, r, c))
}

fn upper_hankel_raw(s: &MomentSequence, m: usize) -> CMat {
    let (blocks, _) = upper_layout(m);
    assemble_blocks(blocks, s.p, |r, c| upper_block(s, m, r, c))
}

/// The block Hankel matrices `(H_m lower, H_m upper)` for `1 <= m <= n`.
///
/// Even `m = 2j`: lower blocks `S_{r+c}` (`r, c <= j`), upper blocks `S_{r+c+1} - S_{r+c+2}`
/// (`r, c < j`). Odd `m = 2j+1`: lower blocks `S_{r+c+1}`, upper blocks `S_{r+c} - S_{r+c+1}`
/// (`r, c <= j`).
pub fn hankel_matrices(s: &MomentSequence, m: usize) -> Result<(SymHermMatrix, SymHermMatrix)> {
    if m == 0 || m > s.n() {
        return Err(Error::Index {
            index: m,
            len: s.n(),
        });
    }
    Ok((
        SymHermMatrix::from_computed(s.field, lower_hankel_raw(s, m)),
        SymHermMatrix::from_computed(s.field, upper_hankel_raw(s, m)),
    ))
}

/// Whether `(S_1, ..., S_n)` lies in the interior of `M_n`: both Hankel matrices of order `n`
/// are positive definite.
pub fn is_interior(s: &MomentSequence, tol: Tolerance) -> Result<bool> {
    if s.n() == 0 {
        return Ok(true);
    }
    let (lower, upper) = hankel_matrices(s, s.n())?;
    Ok(is_positive_definite(&lower, tol)? && is_positive_definite(&upper, tol)?)
}

/// The admissible range `[S_k^-, S_k^+]` of the `k`-th moment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalPair {
    pub lower: SymHermMatrix,
    pub upper: SymHermMatrix,
}

impl ExtremalPair {
    /// `S_k^+ - S_k^-`.
    pub fn width(&self) -> SymHermMatrix {
        &self.upper - &self.lower
    }
}

/// `h* H^{-1} h` where `H` is the leading `(blocks-1)` block principal part of the Hankel matrix
/// of order `m` and `h` is the remainder of its last block column (corner excluded).
fn border_form(
    s: &MomentSequence,
    blocks: usize,
    block: impl Fn(usize, usize) -> CMat,
) -> Option<CMat> {
    let p = s.p;
    let inner = blocks - 1;
    if inner == 0 {
        return Some(CMat::zeros(p, p));
    }
    let h_mat = assemble_blocks(inner, p, &block);
    let mut border = CMat::zeros(inner * p, p);
    for r in 0..inner {
        border
            .view_mut((r * p, 0), (p, p))
            .copy_from(&block(r, inner));
    }
    let chol = Cholesky::new(h_mat)?;
    let y = chol.l().solve_lower_triangular(&border)?;
    Some(y.adjoint() * y)
}

/// Extremal moments without the interiority pre-check; `None` on a failed factorization.
pub(crate) fn extremal_unchecked(
    s: &MomentSequence,
    k: usize,
) -> std::result::Result<ExtremalPair, usize> {
    let (field, p) = (s.field, s.p);
    if k == 1 {
        return Ok(ExtremalPair {
            lower: SymHermMatrix::zeros(field, p),
            upper: SymHermMatrix::identity(field, p),
        });
    }
    let (lower_blocks, _) = lower_layout(k);
    let lower = border_form(s, lower_blocks, |r, c| lower_block(s, k, r, c)).ok_or(k - 2)?;
    let (upper_blocks, _) = upper_layout(k);
    let upper_form = border_form(s, upper_blocks, |r, c| upper_block(s, k, r, c)).ok_or(k - 2)?;
    let upper = s.raw(k - 1) - upper_form;
    Ok(ExtremalPair {
        lower: SymHermMatrix::from_computed(field, lower),
        upper: SymHermMatrix::from_computed(field, upper),
    })
}

/// `(S_k^-, S_k^+)`, which depend on `S_1, ..., S_{k-1}` only.
///
/// Conventions: `S_1^- = 0`, `S_1^+ = I_p`, `S_2^+ = S_1`.
pub fn extremal_moments(s: &MomentSequence, k: usize) -> Result<ExtremalPair> {
    extremal_moments_with(s, k, Tolerance::default())
}

pub fn extremal_moments_with(s: &MomentSequence, k: usize, tol: Tolerance) -> Result<ExtremalPair> {
    if k == 0 || k > s.n() + 1 {
        return Err(Error::Index {
            index: k,
            len: s.n() + 1,
        });
    }
    let prefix = s.truncated(k - 1)?;
    if !is_interior(&prefix, tol)? {
        return Err(Error::NotInterior { order: k - 1 });
    }
    extremal_unchecked(&prefix_with_placeholder(&prefix), k)
        .map_err(|order| Error::SingularHankel { order })
}

/// The prefix extended by a zero `k`-th moment, so Hankel borders of order `k` can be built.
/// The placeholder only ever lands in the excluded corner block.
fn prefix_with_placeholder(prefix: &MomentSequence) -> MomentSequence {
    let mut moments = prefix.moments.clone();
    moments.push(SymHermMatrix::zeros(prefix.field, prefix.p));
    MomentSequence {
        field: prefix.field,
        p: prefix.p,
        moments,
    }
}

/// `ln V(M_n)`.
///
/// Real: `Σ_{k=1}^n ln B_p(k(p+1)/2, k(p+1)/2)`. Complex: `Σ_{k=1}^n ln B_p^{(2)}(kp, kp)`, the
/// normalization implied by the product-form law of complex canonical moments.
pub fn log_volume(n: usize, p: usize, field: FieldCase) -> Result<f64> {
    if n == 0 || p == 0 {
        return Err(Error::Domain(format!("need n, p >= 1 (n={n}, p={p})")));
    }
    (1..=n)
        .map(|k| {
            let a = canonical_beta_parameter(k, p, field);
            log_multivariate_beta(p, a, a, field)
        })
        .sum()
}

/// Beta parameter `a` such that the volume factor of order `k` is `B_p(a, a)`.
pub(crate) fn canonical_beta_parameter(k: usize, p: usize, field: FieldCase) -> f64 {
    match field {
        FieldCase::Real => k as f64 * (p as f64 + 1.0) / 2.0,
        FieldCase::Complex => (k * p) as f64,
    }
}

/// Arcsine moments `s_j^0 = C(2j, j) / 4^j`, `j = 1..=k`.
pub fn arcsine_moments(k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let mut binom: u128 = 1; // C(2j, j)
    let mut last = 1.0_f64;
    for j in 1..=k {
        let s = if j <= 55 {
            let jj = j as u128;
            binom = binom * (2 * jj) * (2 * jj - 1) / (jj * jj);
            binom as f64 / 4f64.powi(j as i32)
        } else {
            last * (2 * j - 1) as f64 / (2 * j) as f64
        };
        out.push(s);
        last = s;
    }
    out
}

fn binomial(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The lower-triangular `k x k` matrix `a_{i,j} = 4^{1-i} C(2i, i-j)`.
#[allow(non_snake_case)]
pub fn clt_matrix_A(k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(k, k, |r, c| {
        let (i, j) = (r as u64 + 1, c as u64 + 1);
        if j > i {
            0.0
        } else {
            binomial(2 * i, i - j) / 4f64.powi(i as i32 - 1)
        }
    })
}

/// Centering and scaling for the moment-vector limit theorem.
#[derive(Clone, Debug)]
pub struct CltConstants {
    pub k: usize,
    pub a: DMatrix<f64>,
    pub arcsine: Vec<f64>,
}

impl CltConstants {
    pub fn new(k: usize) -> Self {
        CltConstants {
            k,
            a: clt_matrix_A(k),
            arcsine: arcsine_moments(k),
        }
    }

    /// `sqrt(4n(p+1))` for the real field, `sqrt(8np)` for the complex field.
    pub fn scale(n: usize, p: usize, field: FieldCase) -> f64 {
        let (n, p) = (n as f64, p as f64);
        match field {
            FieldCase::Real => (4.0 * n * (p + 1.0)).sqrt(),
            FieldCase::Complex => (8.0 * n * p).sqrt(),
        }
    }
}

/// `scale(n) (A^{-1} ⊗ I_p) (S_1 - s_1^0 I, ..., S_k - s_k^0 I)` for the `k = s.n()` moments given.
pub fn standardize_moment_vector(s: &MomentSequence, n: usize) -> Result<Vec<SymHermMatrix>> {
    let k = s.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n (k={k}, n={n})")));
    }
    let consts = CltConstants::new(k);
    let scale = CltConstants::scale(n, s.p, s.field);
    let centered: Vec<CMat> = s
        .moments
        .iter()
        .zip(&consts.arcsine)
        .map(|(m, &c)| m.as_matrix() - CMat::identity(s.p, s.p) * Complex::new(c, 0.0))
        .collect();
    // forward substitution over block rows
    let mut solved: Vec<CMat> = Vec::with_capacity(k);
    for i in 0..k {
        let mut acc = centered[i].clone();
        for (j, y) in solved.iter().enumerate() {
            acc -= y * Complex::new(consts.a[(i, j)], 0.0);
        }
        solved.push(acc / Complex::new(consts.a[(i, i)], 0.0));
    }
    Ok(solved
        .into_iter()
        .map(|y| SymHermMatrix::from_computed(s.field, y * Complex::new(scale, 0.0)))
        .collect())
}
