//! Canonical moments under affine maps, reflection and quadratic symmetrization.

use matmoments::canonical::moments_to_canonical;
use matmoments::canonical::oracle::{discrete_measure_moments, interval_canonical_moments};
use matmoments::linalg::{SymHermMatrix, Tolerance};
use matmoments::moment_space::MomentSequence;

fn main() -> matmoments::Result<()> {
    let points = [0.15, 0.4, 0.7, 0.9];
    let weights = [
        SymHermMatrix::from_real_rows(2, &[0.4, 0.1, 0.1, 0.1])?,
        SymHermMatrix::from_real_rows(2, &[0.2, 0.0, 0.0, 0.3])?,
        SymHermMatrix::from_real_rows(2, &[0.2, -0.1, -0.1, 0.3])?,
        SymHermMatrix::from_real_rows(2, &[0.2, 0.0, 0.0, 0.3])?,
    ];
    let n = 4;
    let s = discrete_measure_moments(&points, &weights, n)?;
    let u = moments_to_canonical(&s)?;

    let (a, b) = (-1.0, 2.0);
    let moved: Vec<f64> = points.iter().map(|x| a + (b - a) * x).collect();
    let on_ab = interval_canonical_moments(
        &discrete_measure_moments(&moved, &weights, n)?,
        a,
        b,
        Tolerance::default(),
    )?;
    let affine = u
        .values()
        .iter()
        .zip(&on_ab)
        .map(|(x, y)| x.max_abs_diff(y))
        .fold(0.0, f64::max);
    println!("affine image on [{a}, {b}]: max deviation {affine:.2e}");

    let mut sym_points = points.to_vec();
    sym_points.extend(points.iter().map(|x| 1.0 - x));
    let sym_weights: Vec<SymHermMatrix> = weights
        .iter()
        .chain(&weights)
        .map(|w| w.scale(0.5))
        .collect();
    let sym = moments_to_canonical(&discrete_measure_moments(&sym_points, &sym_weights, n)?)?;
    for k in (0..n).step_by(2) {
        println!(
            "symmetric measure: U_{} = {:.6} I",
            k + 1,
            sym.values()[k].get(0, 0).re
        );
    }

    let zero = SymHermMatrix::zeros(s.field(), s.p());
    let sigma: Vec<SymHermMatrix> = (1..=2 * n)
        .map(|j| {
            if j % 2 == 1 {
                zero.clone()
            } else {
                s.moments()[j / 2 - 1].clone()
            }
        })
        .collect();
    let u_sigma = interval_canonical_moments(
        &MomentSequence::new(s.field(), s.p(), sigma)?,
        -1.0,
        1.0,
        Tolerance::default(),
    )?;
    for k in 0..n {
        println!(
            "U^sigma_{} - U^mu_{}: {:.2e}",
            2 * k + 2,
            k + 1,
            u_sigma[2 * k + 1].max_abs_diff(&u.values()[k])
        );
    }
    Ok(())
}
