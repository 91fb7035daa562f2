//! Seeded samplers for the Gaussian, Wishart and matrix Beta ensembles and for the uniform
//! distribution on the moment space, together with the closed-form moment and density formulas
//! they are checked against.

mod batch;
mod formulas;
mod samplers;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::FieldCase;

pub use batch::{write_batch, BatchHeader, SampleKind, SampleRequest};
pub use formulas::{
    aomoto_moments, aomoto_second_moment, beta_moment_formulas, jacobi_log_density,
};
pub use samplers::{
    sample_goe, sample_gue, sample_matrix_beta, sample_matrix_beta_counted,
    sample_uniform_canonical_prefix, sample_uniform_moment_space, sample_wishart,
};

/// Root of a reproducible random stream: ChaCha8 keyed by `seed`, on stream `stream`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
}

/// Purpose tags separating sub-streams that share a draw index.
pub mod purpose {
    pub const BATCH: u64 = 0x6261_7463;
    pub const BETA_CLT: u64 = 0x6265_7461;
    pub const MOMENT_CLT: u64 = 0x6d6f_6d74;
    pub const CANONICAL_CLT: u64 = 0x6361_6e6f;
    pub const VOLUME: u64 = 0x766f_6c75;
    pub const LADDER: u64 = 0x6c61_6464;
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState { seed, stream: 0 }
    }

    /// The generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Independent sub-stream for draw `index` and purpose `tag`.
    pub fn substream(&self, index: u64, tag: u64) -> RngState {
        let mixed = splitmix64(splitmix64(self.stream ^ splitmix64(tag)) ^ index);
        RngState {
            seed: self.seed,
            stream: mixed,
        }
    }
}

/// Parameters of a real or complex matrix Beta distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub field: FieldCase,
    pub p: usize,
    pub a: f64,
    pub b: f64,
}

impl BetaParams {
    /// Real: `a, b > (p-1)/2`; complex: `a, b > p-1`.
    pub fn new(field: FieldCase, p: usize, a: f64, b: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("dimension p must be positive".into()));
        }
        let floor = match field {
            FieldCase::Real => (p as f64 - 1.0) / 2.0,
            FieldCase::Complex => p as f64 - 1.0,
        };
        if !(a > floor && b > floor && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!(
                "{field} Beta_{p} needs a, b > {floor}, got a={a}, b={b}"
            )));
        }
        Ok(BetaParams { field, p, a, b })
    }

    /// Shape parameters of the Jacobi ensemble followed by the eigenvalues.
    pub fn eigenvalue_law(&self) -> JacobiParams {
        let shift = match self.field {
            FieldCase::Real => (self.p as f64 - 1.0) / 2.0,
            FieldCase::Complex => self.p as f64 - 1.0,
        };
        JacobiParams {
            a: self.a - shift,
            b: self.b - shift,
            beta: self.field.beta_index() as f64,
            p: self.p,
        }
    }
}

/// Jacobi ensemble `J_β^{(a,b)}` on `p` eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
    pub p: usize,
}

impl JacobiParams {
    pub fn new(a: f64, b: f64, beta: f64, p: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && beta > 0.0) || p == 0 {
            return Err(Error::Domain(format!(
                "Jacobi ensemble needs a, b, beta > 0 and p >= 1 (a={a}, b={b}, beta={beta}, p={p})"
            )));
        }
        Ok(JacobiParams { a, b, beta, p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn same_state_same_stream() {
        let s = RngState { seed: 7, stream: 3 };
        let a: Vec<u64> = (0..4)
            .map({
                let mut r = s.rng();
                move |_| r.next_u64()
            })
            .collect();
        let mut r = s.rng();
        let b: Vec<u64> = (0..4).map(|_| r.next_u64()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn substreams_differ() {
        let root = RngState::new(1);
        let x = root.substream(0, purpose::BATCH).rng().next_u64();
        let y = root.substream(1, purpose::BATCH).rng().next_u64();
        let z = root.substream(0, purpose::VOLUME).rng().next_u64();
        assert!(x != y && x != z && y != z);
        assert_eq!(root.substream(5, 9), root.substream(5, 9));
    }

    #[test]
    fn beta_domain() {
        assert!(BetaParams::new(FieldCase::Real, 3, 1.0, 2.0).is_err());
        assert!(BetaParams::new(FieldCase::Real, 3, 1.01, 2.0).is_ok());
        assert!(BetaParams::new(FieldCase::Complex, 3, 2.5, 2.0).is_err());
        assert!(BetaParams::new(FieldCase::Complex, 3, 2.5, 2.01).is_ok());
    }
}
