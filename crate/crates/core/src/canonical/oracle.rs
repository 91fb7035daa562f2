//! Independent reference computations used to cross-check the canonical map: moments of
//! finitely supported measures, the K-matrix recursion for the symmetrized measure, and canonical
//! moments on a general interval `[a, b]` built straight from the Hankel matrices.

use nalgebra::{Cholesky, Complex};

use super::{nonsymmetric_canonical, CanonicalSequence};
use crate::error::{Error, Result};
use crate::linalg::{eig_sym, sym_sqrt_with, CMat, SymHermMatrix, Tolerance};
use crate::moment_space::{assemble_blocks, MomentSequence};

/// `S_j = Σ_i x_i^j W_i` for `j = 1..=k`. The weights must be positive semidefinite and sum to
/// `I` within `1e-12`.
pub fn discrete_measure_moments(
    points: &[f64],
    weights: &[SymHermMatrix],
    k: usize,
) -> Result<MomentSequence> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(Error::Weight(format!(
            "{} points but {} weights",
            points.len(),
            weights.len()
        )));
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("atoms must be finite".into()));
    }
    let (field, p) = (weights[0].field(), weights[0].p());
    let mut total = SymHermMatrix::zeros(field, p);
    for (i, w) in weights.iter().enumerate() {
        if w.field() != field || w.p() != p {
            return Err(Error::Weight(format!("weight {i} has a different shape")));
        }
        let min = eig_sym(w)?.min();
        if min < -1e-12 {
            return Err(Error::Weight(format!(
                "weight {i} is not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        total = &total + w;
    }
    let deviation = total.max_abs_diff(&SymHermMatrix::identity(field, p));
    if deviation > 1e-12 {
        return Err(Error::Weight(format!(
            "weights sum to I only within {deviation:e}"
        )));
    }
    let moments = (1..=k)
        .map(|j| {
            let mut acc = CMat::zeros(p, p);
            for (x, w) in points.iter().zip(weights) {
                acc += w.as_matrix() * Complex::new(x.powi(j as i32), 0.0);
            }
            SymHermMatrix::from_computed(field, acc)
        })
        .collect();
    MomentSequence::new(field, p, moments)
}

/// `S_n` through the K-matrix recursion `K_{r,c} = K_{r-1,c-1} + K_{r-1,c+1} ζ_{c+1}^*` with
/// `K_{c,c} = I`, `K_{r,-1} = 0`, returning `K_{2n,0}`.
pub fn moments_via_k_matrix_oracle(u: &CanonicalSequence, n: usize) -> Result<SymHermMatrix> {
    if n == 0 || n > u.n() {
        return Err(Error::Index {
            index: n,
            len: u.n(),
        });
    }
    let z = nonsymmetric_canonical(u)?;
    let p = u.p();
    let zero = CMat::zeros(p, p);
    let rows = 2 * n + 1;
    // k[r][c] for c <= r; entries with r + c odd stay zero
    let mut k: Vec<Vec<CMat>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row = vec![zero.clone(); r + 1];
        row[r] = CMat::identity(p, p);
        for c in (0..r).rev() {
            if (r + c) % 2 == 1 {
                continue;
            }
            let down = if c == 0 {
                zero.clone()
            } else {
                k[r - 1][c - 1].clone()
            };
            let across = if c < r - 1 && c < z.zeta.len() {
                &k[r - 1][c + 1] * z.zeta[c].adjoint()
            } else {
                zero.clone()
            };
            row[c] = down + across;
        }
        k.push(row);
    }
    Ok(SymHermMatrix::from_computed(u.field(), k[2 * n][0].clone()))
}

/// Canonical moments of a measure on `[a, b]` from its raw moments `T_1, ..., T_n`.
///
/// The Hankel matrices on `[a, b]` are, for even order, `T_{r+c}` and
/// `(a+b) T_{r+c+1} - T_{r+c+2} - ab T_{r+c}`, and for odd order `T_{r+c+1} - a T_{r+c}` and
/// `b T_{r+c} - T_{r+c+1}`. The extremal moments come from the Schur complement of the corner.
pub fn interval_canonical_moments(
    t: &MomentSequence,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Vec<SymHermMatrix>> {
    if !(a < b) {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    let (field, p) = (t.field(), t.p());
    let raw = |j: usize| -> CMat {
        if j == 0 {
            CMat::identity(p, p)
        } else {
            t.moments()[j - 1].as_matrix().clone()
        }
    };
    let c = |x: f64| Complex::new(x, 0.0);
    let mut out = Vec::with_capacity(t.n());
    for k in 1..=t.n() {
        let even = k % 2 == 0;
        let lower_entry = |r: usize, s: usize| -> CMat {
            if even {
                raw(r + s)
            } else {
                raw(r + s + 1) - raw(r + s) * c(a)
            }
        };
        let upper_entry = |r: usize, s: usize| -> CMat {
            if even {
                raw(r + s + 1) * c(a + b) - raw(r + s + 2) - raw(r + s) * c(a * b)
            } else {
                raw(r + s) * c(b) - raw(r + s + 1)
            }
        };
        let lower_blocks = k / 2 + 1;
        let upper_blocks = k.div_ceil(2);
        let lower_shift = if even {
            CMat::zeros(p, p)
        } else {
            raw(k - 1) * c(a)
        };
        let upper_shift = if even {
            raw(k - 1) * c(a + b) - raw(k - 2) * c(a * b)
        } else {
            raw(k - 1) * c(b)
        };
        let lo = lower_shift + schur_form(p, lower_blocks, &lower_entry, k)?;
        let hi = upper_shift - schur_form(p, upper_blocks, &upper_entry, k)?;
        let width = SymHermMatrix::from_computed(field, hi - &lo);
        let inv_sqrt = sym_sqrt_with(&width, true, tol).map_err(|_| Error::SingularRange { k })?;
        let offset = SymHermMatrix::from_computed(field, raw(k) - lo);
        out.push(offset.congruence(&inv_sqrt));
    }
    Ok(out)
}

fn schur_form(
    p: usize,
    blocks: usize,
    entry: &dyn Fn(usize, usize) -> CMat,
    k: usize,
) -> Result<CMat> {
    let inner = blocks - 1;
    if inner == 0 {
        return Ok(CMat::zeros(p, p));
    }
    let h = assemble_blocks(inner, p, entry);
    let mut border = CMat::zeros(inner * p, p);
    for r in 0..inner {
        border
            .view_mut((r * p, 0), (p, p))
            .copy_from(&entry(r, inner));
    }
    let chol = Cholesky::new(h).ok_or(Error::SingularHankel { order: k - 2 })?;
    Ok(border.adjoint() * chol.solve(&border))
}
