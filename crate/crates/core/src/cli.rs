//! The `matmoments` command line. Every command writes machine-readable JSON (or NDJSON) to
//! stdout or to `--out`; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage, domain or validation error, 3 a `verify` run
//! whose verdicts did not all pass.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::canonical::{canonical_to_moments, moments_to_canonical_with, CanonicalSequence};
use crate::ensembles::{write_batch, SampleKind, SampleRequest};
use crate::error::{Error, Result};
use crate::lab::{run_experiment, ExperimentConfig};
use crate::linalg::{FieldCase, Tolerance};
use crate::moment_space::{clt_matrix_A, is_interior, log_volume, MomentSequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STAT_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "matmoments",
    version,
    about = "Moment spaces of matrix measures on [0, 1]"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume of the moment space M_n.
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value = "real")]
        field: FieldCase,
    },
    /// Arcsine moments s_1^0, ..., s_n^0 as a moment sequence `s_j^0 I_p`.
    Arcsine {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value = "real")]
        field: FieldCase,
    },
    /// The k x k matrix A of the moment-vector limit.
    CltMatrix {
        #[arg(long)]
        k: usize,
    },
    /// Moment sequence to canonical moments.
    Map(MapArgs),
    /// Canonical moments to moment sequence.
    Unmap(MapArgs),
    /// Checks a moment sequence, or every sequence of a sample file, for interiority.
    CheckInterior {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Writes a seeded NDJSON batch: a header line, then one matrix or sequence per line.
    Sample(SampleArgs),
    /// Runs the experiment described by a JSON config and writes its report.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Raw standardized coordinates, one row per sample.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative eigenvalue floor for interiority decisions.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub kind: SampleKind,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "real")]
    pub field: FieldCase,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn tolerance(tol: Option<f64>) -> Result<Tolerance> {
    match tol {
        Some(rel) => Tolerance::new(rel, Tolerance::default().abs),
        None => Ok(Tolerance::default()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn json_line(value: &impl serde::Serialize) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `bytes` to `path` through a sibling temporary file, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(bytes)?;
        return Ok(out.flush()?);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn volume_json(n: usize, p: usize, field: FieldCase) -> Result<Value> {
    let lv = log_volume(n, p, field)?;
    let v = lv.exp();
    let volume = if v > 0.0 && v.is_normal() {
        json!(v)
    } else {
        json!("underflow")
    };
    Ok(json!({ "log_volume": lv, "volume": volume }))
}

/// The lines of `text` that hold moment sequences: a single JSON document, or NDJSON with an
/// optional batch header.
fn moment_sequences(text: &str) -> Result<Vec<MomentSequence>> {
    if let Ok(one) = serde_json::from_str::<MomentSequence>(text) {
        return Ok(vec![one]);
    }
    let mut out = Vec::new();
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let value: Value = serde_json::from_str(line)?;
        if i == 0 && value.get("kind").is_some() {
            continue;
        }
        out.push(serde_json::from_value(value)?);
    }
    if out.is_empty() {
        return Err(Error::Config("no moment sequences in input".into()));
    }
    Ok(out)
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Volume { n, p, field } => {
            write_output(None, &json_line(&volume_json(n, p, field)?)?)?;
        }
        Command::Arcsine { n, p, field } => {
            if n == 0 || p == 0 {
                return Err(Error::Domain("need n, p >= 1".into()));
            }
            let s = MomentSequence::arcsine_center(field, p, n);
            write_output(None, &json_line(&s)?)?;
        }
        Command::CltMatrix { k } => {
            if k == 0 {
                return Err(Error::Domain("need k >= 1".into()));
            }
            let a = clt_matrix_A(k);
            let rows: Vec<Vec<f64>> = a.row_iter().map(|r| r.iter().copied().collect()).collect();
            write_output(None, &json_line(&json!({ "k": k, "A": rows }))?)?;
        }
        Command::Map(args) => {
            let tol = tolerance(args.tol)?;
            let s: MomentSequence = read_json(&args.input)?;
            let u = moments_to_canonical_with(&s, tol)?;
            write_output(args.out.as_deref(), &json_line(&u)?)?;
        }
        Command::Unmap(args) => {
            tolerance(args.tol)?;
            let u: CanonicalSequence = read_json(&args.input)?;
            let s = canonical_to_moments(&u)?;
            write_output(args.out.as_deref(), &json_line(&s)?)?;
        }
        Command::CheckInterior { input, tol } => {
            let tol = tolerance(tol)?;
            let sequences = moment_sequences(&fs::read_to_string(&input)?)?;
            let flags = sequences
                .iter()
                .map(|s| is_interior(s, tol))
                .collect::<Result<Vec<_>>>()?;
            let interior = flags.iter().filter(|&&f| f).count();
            let report = json!({
                "sequences": flags.len(),
                "interior": interior,
                "all_interior": interior == flags.len(),
                "first_failure": flags.iter().position(|&f| !f),
            });
            write_output(None, &json_line(&report)?)?;
        }
        Command::Sample(args) => {
            let request = SampleRequest {
                kind: args.kind,
                field: args.field,
                p: args.p,
                n: args.n,
                a: args.a,
                b: args.b,
                seed: args.seed,
                count: args.count,
            };
            request.header()?;
            let mut buf = Vec::new();
            write_batch(&request, &mut buf)?;
            write_output(args.out.as_deref(), &buf)?;
        }
        Command::Verify {
            input,
            out,
            csv,
            samples,
            seed,
        } => {
            let mut config: ExperimentConfig = read_json(&input)?;
            if let Some(s) = samples {
                config.samples = s;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            config.validate()?;
            let start = Instant::now();
            let experiment = run_experiment(&config)?;
            eprintln!(
                "{:?}: {} in {:.2}s",
                config.kind,
                if experiment.report.pass {
                    "pass"
                } else {
                    "FAIL"
                },
                start.elapsed().as_secs_f64()
            );
            if let (Some(path), Some(table)) = (csv.as_deref(), &experiment.table) {
                let mut buf = Vec::new();
                table.write_csv(&mut buf)?;
                write_output(Some(path), &buf)?;
            }
            let mut bytes = serde_json::to_vec_pretty(&experiment.report)?;
            bytes.push(b'\n');
            write_output(out.as_deref(), &bytes)?;
            if !experiment.report.pass {
                return Ok(EXIT_STAT_FAIL);
            }
        }
    }
    Ok(EXIT_OK)
}
