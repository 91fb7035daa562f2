use nalgebra::DMatrix;

use super::{canonical_to_moments, CanonicalSequence};
use crate::error::{Error, Result};
use crate::linalg::{FieldCase, SymHermMatrix};

/// Central-difference Jacobian of the inverse canonical map at `U⁰ = (½I, ..., ½I)`.
///
/// Rows and columns are indexed by `(block, coordinate)` with the real coordinates of
/// [`SymHermMatrix::coordinates`]; the expected value is `A ⊗ I_d` where `d` is the number of
/// real coordinates of a `p x p` matrix.
pub fn numerical_jacobian_at_center(
    k: usize,
    p: usize,
    field: FieldCase,
    h: f64,
) -> Result<DMatrix<f64>> {
    if k == 0 || p == 0 {
        return Err(Error::Domain(format!("need k, p >= 1 (k={k}, p={p})")));
    }
    if !(h > 1e-7 && h < 1e-3) {
        return Err(Error::Domain(format!("step h={h} outside (1e-7, 1e-3)")));
    }
    let d = field.real_dimension(p);
    let center = CanonicalSequence::center(field, p, k);
    let mut jac = DMatrix::zeros(k * d, k * d);
    let mut unit = vec![0.0; d];
    for block in 0..k {
        for coord in 0..d {
            unit.iter_mut().for_each(|x| *x = 0.0);
            unit[coord] = 1.0;
            let direction = SymHermMatrix::from_coordinates(field, p, &unit)?;
            let forward = shifted_moments(&center, block, &direction, h)?;
            let backward = shifted_moments(&center, block, &direction, -h)?;
            for (row_block, (f, b)) in forward.iter().zip(&backward).enumerate() {
                for (i, (x, y)) in f.iter().zip(b).enumerate() {
                    jac[(row_block * d + i, block * d + coord)] = (x - y) / (2.0 * h);
                }
            }
        }
    }
    Ok(jac)
}

fn shifted_moments(
    center: &CanonicalSequence,
    block: usize,
    direction: &SymHermMatrix,
    step: f64,
) -> Result<Vec<Vec<f64>>> {
    let mut values = center.values().to_vec();
    values[block] = &values[block] + &direction.scale(step);
    let u = CanonicalSequence::new_unchecked(center.field(), center.p(), values);
    Ok(canonical_to_moments(&u)?
        .moments()
        .iter()
        .map(SymHermMatrix::coordinates)
        .collect())
}

/// `A ⊗ I_d`.
pub fn kron_identity(a: &DMatrix<f64>, d: usize) -> DMatrix<f64> {
    a.kronecker(&DMatrix::identity(d, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment_space::clt_matrix_A;

    fn max_dev(k: usize, p: usize, field: FieldCase, h: f64) -> f64 {
        let j = numerical_jacobian_at_center(k, p, field, h).unwrap();
        let e = kron_identity(&clt_matrix_A(k), field.real_dimension(p));
        (j - e).amax()
    }

    #[test]
    fn first_order_is_identity() {
        for p in 1..=3 {
            assert!(max_dev(1, p, FieldCase::Complex, 1e-5) < 1e-9);
        }
    }

    #[test]
    fn scalar_two_by_two() {
        let j = numerical_jacobian_at_center(2, 1, FieldCase::Real, 1e-5).unwrap();
        let expected = [1.0, 1.0, 0.0, 0.25];
        for (x, e) in j.as_slice().iter().zip(expected) {
            assert!((x - e).abs() < 1e-8);
        }
    }

    #[test]
    fn block_pattern() {
        assert!(max_dev(3, 2, FieldCase::Real, 1e-5) < 1e-6);
        assert!(max_dev(3, 2, FieldCase::Complex, 1e-5) < 1e-6);
    }

    #[test]
    fn step_range_checked() {
        assert!(numerical_jacobian_at_center(2, 1, FieldCase::Real, 1e-2).is_err());
    }
}
