//! Eigenvalues of matrix Beta draws against the Jacobi ensemble and its Aomoto moments.

use matmoments::ensembles::{
    aomoto_moments, beta_moment_formulas, jacobi_log_density, sample_matrix_beta, BetaParams,
    RngState,
};
use matmoments::linalg::{eigenvalues, FieldCase};

fn main() -> matmoments::Result<()> {
    let params = BetaParams::new(FieldCase::Real, 3, 4.0, 2.5)?;
    let law = params.eigenvalue_law();
    let (c1, c2) = beta_moment_formulas(&params)?;
    println!("E[X] = {c1:.5} I, E[X^2] = {c2:.5} I");
    println!(
        "E[tr X] from the Jacobi ensemble: {:.5}",
        law.p as f64 * aomoto_moments(&law, 1)?
    );

    let root = RngState::new(11);
    let draws = 50_000;
    let mut trace = 0.0;
    for i in 0..draws {
        let x = sample_matrix_beta(&params, &mut root.substream(i, 0).rng())?;
        trace += x.trace();
    }
    println!("E[tr X] from {draws} draws: {:.5}", trace / draws as f64);

    let x = sample_matrix_beta(&params, &mut RngState::new(12).rng())?;
    let lambda = eigenvalues(&x)?;
    println!(
        "eigenvalues {lambda:?}, log density {:.4}",
        jacobi_log_density(&lambda, &law)?
    );
    Ok(())
}
