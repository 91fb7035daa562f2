use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    purpose, sample_goe, sample_gue, sample_matrix_beta, sample_uniform_moment_space, BetaParams,
    RngState,
};
use crate::error::{Error, Result};
use crate::linalg::FieldCase;
use crate::parallel::map_indexed;

/// Distribution of a sample batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    Goe,
    Gue,
    Beta,
    UniformMoments,
}

impl std::str::FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown sample kind {s:?}")))
    }
}

/// A fully specified batch.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRequest {
    pub kind: SampleKind,
    pub field: FieldCase,
    pub p: usize,
    pub n: Option<usize>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub seed: u64,
    pub count: usize,
}

/// First line of a batch file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchHeader {
    pub kind: SampleKind,
    pub params: Value,
    pub seed: u64,
    pub count: usize,
}

enum Plan {
    Goe,
    Gue,
    Beta(BetaParams),
    Uniform { n: usize },
}

impl SampleRequest {
    fn plan(&self) -> Result<(Plan, Value)> {
        if self.p == 0 {
            return Err(Error::Domain("dimension p must be positive".into()));
        }
        let p = self.p;
        Ok(match self.kind {
            SampleKind::Goe => (Plan::Goe, json!({ "p": p })),
            SampleKind::Gue => (Plan::Gue, json!({ "p": p })),
            SampleKind::Beta => {
                let (Some(a), Some(b)) = (self.a, self.b) else {
                    return Err(Error::Config("beta sampling needs both a and b".into()));
                };
                let params = BetaParams::new(self.field, p, a, b)?;
                (
                    Plan::Beta(params),
                    json!({ "field": self.field, "p": p, "a": a, "b": b }),
                )
            }
            SampleKind::UniformMoments => {
                let n = self
                    .n
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::Config("uniform-moments sampling needs n >= 1".into()))?;
                (
                    Plan::Uniform { n },
                    json!({ "field": self.field, "p": p, "n": n }),
                )
            }
        })
    }

    pub fn header(&self) -> Result<BatchHeader> {
        Ok(BatchHeader {
            kind: self.kind,
            params: self.plan()?.1,
            seed: self.seed,
            count: self.count,
        })
    }
}

/// Writes the header and one JSON value per draw. Draw `i` uses its own sub-stream, so the
/// output is independent of the worker count.
pub fn write_batch<W: Write>(request: &SampleRequest, out: &mut W) -> Result<()> {
    let (plan, params) = request.plan()?;
    let root = RngState::new(request.seed);
    let lines: Vec<Result<String>> = map_indexed(request.count, |i| {
        let mut rng = root.substream(i as u64, purpose::BATCH).rng();
        let line = match &plan {
            Plan::Goe => serde_json::to_string(&sample_goe(request.p, &mut rng))?,
            Plan::Gue => serde_json::to_string(&sample_gue(request.p, &mut rng))?,
            Plan::Beta(params) => serde_json::to_string(&sample_matrix_beta(params, &mut rng)?)?,
            Plan::Uniform { n } => serde_json::to_string(&sample_uniform_moment_space(
                *n,
                request.p,
                request.field,
                &mut rng,
            )?)?,
        };
        Ok(line)
    });
    let header = BatchHeader {
        kind: request.kind,
        params,
        seed: request.seed,
        count: request.count,
    };
    serde_json::to_writer(&mut *out, &header)?;
    out.write_all(b"\n")?;
    for line in lines {
        out.write_all(line?.as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
