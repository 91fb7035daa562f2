//! Uniform draws from the moment space through independent matrix Beta canonical moments.

use matmoments::ensembles::{sample_uniform_moment_space, RngState};
use matmoments::linalg::{FieldCase, Tolerance};
use matmoments::moment_space::{is_interior, MomentSequence};

fn main() -> matmoments::Result<()> {
    let (n, p, field) = (5, 2, FieldCase::Complex);
    let root = RngState::new(7);
    let draws = (0..2000)
        .map(|i| sample_uniform_moment_space(n, p, field, &mut root.substream(i, 0).rng()))
        .collect::<matmoments::Result<Vec<MomentSequence>>>()?;
    let interior = draws
        .iter()
        .filter(|s| is_interior(s, Tolerance::default()).unwrap_or(false))
        .count();
    println!("{interior}/{} draws are interior", draws.len());
    for k in 0..n {
        let mean = draws
            .iter()
            .map(|s| s.moments()[k].get(0, 0).re)
            .sum::<f64>()
            / draws.len() as f64;
        println!("mean S_{}[1,1] = {mean:.4}", k + 1);
    }
    Ok(())
}
