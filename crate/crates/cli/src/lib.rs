//! `tropbraid` command-line front end.

pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tropbraid::braid::{
    detect_flip_events, parse_braid_word, word_to_motion, LayoutParams, MotionError, MotionFile, MotionPlan,
    TraceOptions,
};
use tropbraid::formats::{flip_sequence_tsv, invariant_tsv, triangulation_tsv, TriangulationFile};
use tropbraid::invariant::{compare, compute_invariant, initial_labels, InvariantError, InvariantVector, LabelScheme};
use tropbraid::sphere::{delaunay, Configuration, SphereError};
use tropbraid::TropicalValue;

use verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEQUAL: i32 = 1;
pub const EXIT_GEOMETRY: i32 = 2;
pub const EXIT_NON_GENERIC: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Geometry(String),
    #[error("{0}")]
    NonGeneric(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Geometry(_) => EXIT_GEOMETRY,
            CliError::NonGeneric(_) => EXIT_NON_GENERIC,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<MotionError> for CliError {
    fn from(e: MotionError) -> Self {
        let msg = e.to_string();
        match e {
            MotionError::Parse { .. } | MotionError::IndexOutOfRange { .. } | MotionError::InvalidOptions(_) => {
                CliError::Usage(msg)
            }
            MotionError::Layout(_) | MotionError::Geometry { .. } => CliError::Geometry(msg),
            MotionError::Collision { .. } | MotionError::NonGenericMotion { .. } => CliError::NonGeneric(msg),
            MotionError::InvalidTrajectory { .. } | MotionError::NotALoop(_) => CliError::Mismatch(msg),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Motion(m) => m.into(),
            InvariantError::InvalidRange { .. } => CliError::Usage(e.to_string()),
            other => CliError::Mismatch(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Parser, Debug)]
#[command(
    name = "tropbraid",
    version,
    about = "Tropical Ptolemy invariants of spherical braids"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Geometric tolerance for general-position checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps: f64,
    /// Initial sampling step for event detection.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub dt: f64,
    /// Smallest bisection interval for event detection.
    #[arg(long = "dt-min", global = true, default_value_t = 1e-12)]
    pub dt_min: f64,
    /// Seed for layouts, random labels and verification trials.
    #[arg(long, global = true, env = "TROPBRAID_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn trace_options(&self) -> Result<TraceOptions, CliError> {
        let opts = TraceOptions {
            eps_geo: self.eps,
            dt_init: self.dt,
            dt_min: self.dt_min,
        };
        opts.validate()?;
        Ok(opts)
    }
}

/// Where a motion comes from: a motion file or a braid word.
#[derive(Args, Debug, Clone)]
pub struct MotionSource {
    /// Motion plan file (JSON).
    pub motion: Option<PathBuf>,
    /// Braid word such as "s1 s2^-1 s1".
    #[arg(long, conflicts_with = "motion", requires = "n")]
    pub word: Option<String>,
    /// Number of strands for --word.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Warp {
    /// t ↦ t
    Identity,
    /// t ↦ t²
    Square,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Delaunay triangulation of a point file (JSON list of [x, y, z]).
    Delaunay { points: PathBuf },
    /// Write the motion plan of a braid word, optionally perturbed.
    Motion {
        #[command(flatten)]
        source: MotionSource,
        /// Move every keyframe by at most this distance.
        #[arg(long)]
        jitter: Option<f64>,
        /// Seed for --jitter (defaults to --seed).
        #[arg(long)]
        jitter_seed: Option<u64>,
        /// Time reparametrization applied last.
        #[arg(long, value_enum, default_value_t = Warp::Identity)]
        reparam: Warp,
    },
    /// Flip events of a motion.
    Trace {
        #[command(flatten)]
        source: MotionSource,
    },
    /// Final labels after pushing initial labels through the flip events.
    Invariant {
        #[command(flatten)]
        source: MotionSource,
        /// Label file, `random[:LO:HI[:SEED]]` or `const:V`.
        #[arg(long)]
        labels: String,
    },
    /// Compare two invariant files; exit 0 if equal, 1 if not.
    Compare { first: PathBuf, second: PathBuf },
    /// Run a seeded property suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

/// Parses a `--labels` value.
pub fn parse_label_scheme(value: &str, default_seed: u64) -> Result<LabelScheme, CliError> {
    let bad = || CliError::Usage(format!("invalid --labels value '{value}'"));
    if let Some(v) = value.strip_prefix("const:") {
        let label: TropicalValue = v.parse().map_err(|_| bad())?;
        return Ok(LabelScheme::Constant(label));
    }
    if value == "random" || value.starts_with("random:") {
        let parts: Vec<&str> = value.split(':').skip(1).collect();
        let int = |s: &str| s.parse::<i64>().map_err(|_| bad());
        let (lo, hi, seed) = match parts.as_slice() {
            [] => (-10, 10, default_seed),
            [lo, hi] => (int(lo)?, int(hi)?, default_seed),
            [lo, hi, seed] => (int(lo)?, int(hi)?, seed.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        return Ok(LabelScheme::SeededRandom { seed, lo, hi });
    }
    Ok(LabelScheme::File(PathBuf::from(value)))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Mismatch(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Mismatch(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load_motion(source: &MotionSource, config: &RunConfig) -> Result<MotionPlan, CliError> {
    match (&source.motion, &source.word) {
        (Some(path), None) => {
            let file: MotionFile = read_json(path)?;
            Ok(MotionPlan::from_file(&file)?)
        }
        (None, Some(word)) => {
            let n = source.n.ok_or_else(|| CliError::Usage("--word needs --n".into()))?;
            let word = parse_braid_word(word, n)?;
            Ok(word_to_motion(&word, &LayoutParams::with_seed(config.seed))?)
        }
        _ => Err(CliError::Usage("give a motion file or --word with --n".into())),
    }
}

fn geometry_error(e: SphereError) -> CliError {
    CliError::Geometry(e.to_string())
}

/// Output text and a one-line summary for standard error.
struct Output {
    body: String,
    summary: Option<String>,
    code: i32,
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let config = &cli.config;
    if config.eps.is_nan() || config.eps <= 0.0 {
        return Err(CliError::Usage("--eps must be positive".into()));
    }
    match &cli.command {
        Command::Delaunay { points } => {
            let c: Configuration = read_json(points)?;
            let t = delaunay(&c, config.eps).map_err(geometry_error)?;
            let body = match config.format {
                Format::Json => to_json(&TriangulationFile::from(&t)),
                Format::Tsv => triangulation_tsv(&t),
            };
            Ok(Output {
                body,
                summary: Some(format!("edges: {}", t.edge_count())),
                code: EXIT_OK,
            })
        }
        Command::Motion {
            source,
            jitter,
            jitter_seed,
            reparam,
        } => {
            let mut plan = load_motion(source, config)?;
            if let Some(mag) = jitter {
                plan = plan.jittered(jitter_seed.unwrap_or(config.seed), *mag)?;
            }
            if *reparam == Warp::Square {
                plan = plan.reparametrized(|t| t * t)?;
            }
            Ok(Output {
                body: to_json(&plan.to_file()),
                summary: None,
                code: EXIT_OK,
            })
        }
        Command::Trace { source } => {
            let opts = config.trace_options()?;
            let plan = load_motion(source, config)?;
            let seq = detect_flip_events(&plan, &opts)?;
            let body = match config.format {
                Format::Json => to_json(&seq),
                Format::Tsv => flip_sequence_tsv(&seq),
            };
            Ok(Output {
                body,
                summary: Some(format!("events: {}", seq.len())),
                code: EXIT_OK,
            })
        }
        Command::Invariant { source, labels } => {
            let opts = config.trace_options()?;
            let scheme = parse_label_scheme(labels, config.seed)?;
            let plan = load_motion(source, config)?;
            let start = delaunay(&plan.eval(0.0), config.eps).map_err(geometry_error)?;
            let labeled = initial_labels(&start, &scheme)?;
            let inv = compute_invariant(&plan, &labeled, &opts)?;
            let body = match config.format {
                Format::Json => to_json(&inv),
                Format::Tsv => invariant_tsv(&inv),
            };
            Ok(Output {
                body,
                summary: Some(format!("labels: {}", inv.len())),
                code: EXIT_OK,
            })
        }
        Command::Compare { first, second } => {
            let a: InvariantVector = read_json(first)?;
            let b: InvariantVector = read_json(second)?;
            let equal = compare(&a, &b)?;
            Ok(Output {
                body: if equal { "equal\n".into() } else { "different\n".into() },
                summary: None,
                code: if equal { EXIT_OK } else { EXIT_UNEQUAL },
            })
        }
        Command::Verify { suite, trials } => {
            let report = run_suite(*suite, *trials, config.seed, config.eps);
            Ok(Output {
                body: report.to_string(),
                summary: None,
                code: if report.ok() { EXIT_OK } else { EXIT_UNEQUAL },
            })
        }
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let written = match &cli.config.output {
                Some(path) => {
                    std::fs::write(path, &output.body).map_err(|e| format!("cannot write {}: {e}", path.display()))
                }
                None => out.write_all(output.body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(err, "error: {msg}");
                return EXIT_MISMATCH;
            }
            if let Some(summary) = output.summary {
                let _ = writeln!(err, "{summary}");
            }
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
