//! Finite-difference derivative of the inverse canonical map at the arcsine centre.

use matmoments::canonical::{kron_identity, numerical_jacobian_at_center};
use matmoments::linalg::FieldCase;
use matmoments::moment_space::clt_matrix_A;

fn main() -> matmoments::Result<()> {
    let (k, p, field) = (4, 2, FieldCase::Complex);
    let jac = numerical_jacobian_at_center(k, p, field, 1e-5)?;
    let expected = kron_identity(&clt_matrix_A(k), field.real_dimension(p));
    println!("J is {}x{}", jac.nrows(), jac.ncols());
    println!("max |J - A (x) I| = {:.2e}", (jac - expected).amax());
    Ok(())
}
