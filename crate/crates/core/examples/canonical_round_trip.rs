//! Canonical moments of a discrete matrix measure, and back again.

use matmoments::canonical::oracle::discrete_measure_moments;
use matmoments::canonical::{canonical_to_moments, moments_to_canonical, range_widths};
use matmoments::linalg::{eigenvalues, SymHermMatrix};

fn main() -> matmoments::Result<()> {
    let points = [0.1, 0.45, 0.8];
    let weights = [
        SymHermMatrix::from_real_rows(2, &[0.5, 0.1, 0.1, 0.2])?,
        SymHermMatrix::from_real_rows(2, &[0.3, -0.1, -0.1, 0.3])?,
        SymHermMatrix::from_real_rows(2, &[0.2, 0.0, 0.0, 0.5])?,
    ];
    let s = discrete_measure_moments(&points, &weights, 4)?;
    let u = moments_to_canonical(&s)?;
    for (k, uk) in u.values().iter().enumerate() {
        println!("U_{} eigenvalues {:?}", k + 1, eigenvalues(uk)?);
    }
    let widths = range_widths(&u)?;
    for (k, d) in widths.d.iter().enumerate() {
        println!("width of the range of S_{}: trace {:.3e}", k + 1, d.trace());
    }
    let back = canonical_to_moments(&u)?;
    println!(
        "max relative error of unmap(map(S)): {:.2e}",
        s.max_relative_deviation(&back)
    );
    Ok(())
}
