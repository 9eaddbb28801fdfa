use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hodge_spectra::eigensolve::DEFAULT_TOLERANCE;
use hodge_spectra::{build_domain, BoxDomain, Error, ProblemKind, Result};
use serde::{Deserialize, Serialize};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HODGE_SPECTRA_THREADS";

/// Largest ball dimension accepted.
pub const MAX_BALL_DIM: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Ball,
    Box,
    Verify,
    Constants,
    Converge,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Ball => "ball",
            CommandKind::Box => "box",
            CommandKind::Verify => "verify",
            CommandKind::Constants => "constants",
            CommandKind::Converge => "converge",
        }
    }
}

/// A fully validated run request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extent: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemKindName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resolutions: Vec<usize>,
    /// One-based eigenvalue index of a convergence study.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub tolerance: f64,
    pub threads: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Problem kind as written in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProblemKindName(pub String);

impl ProblemKindName {
    pub fn kind(&self) -> Result<ProblemKind> {
        self.0.parse()
    }
}

impl RunConfig {
    pub fn problem_kind(&self) -> Result<ProblemKind> {
        self.problem
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no problem kind given".into()))?
            .kind()
    }

    pub fn domain(&self) -> Result<BoxDomain> {
        build_domain(self.dim, &self.extent, &self.cells)
    }
}

#[derive(Debug, Parser)]
#[command(name = "hodge-spectra", version, about = "Eigenvalues of clamped-plate, buckling and Laplace problems on forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form first eigenvalues of a Euclidean ball and the chain checks.
    Ball(BallArgs),
    /// Lowest eigenvalues of one problem on a box.
    Box(BoxArgs),
    /// All problems and degrees on a box, with convergence studies and the
    /// inequality battery.
    Verify(VerifyArgs),
    /// The constant C_{n,p} and the curvature lower bounds.
    Constants(ConstantsArgs),
    /// Mesh-convergence study with Richardson extrapolation.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Report file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Relative residual tolerance of every eigenpair.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Debug, Args)]
struct BallArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BoxArgs {
    #[arg(long)]
    dim: usize,
    /// Side lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    extent: Vec<f64>,
    /// Interior nodes per axis, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    cells: Vec<usize>,
    /// clamped_plate, buckling, dirichlet_laplace, absolute_laplace or relative_laplace.
    #[arg(long)]
    problem: String,
    #[arg(long, default_value_t = 0)]
    degree: usize,
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[command(flatten)]
    solve: SolveArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    extent: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    cells: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[command(flatten)]
    solve: SolveArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    degree: u32,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    extent: Vec<f64>,
    #[arg(long)]
    problem: String,
    #[arg(long, default_value_t = 0)]
    degree: usize,
    /// Interior nodes per axis at each level, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    resolutions: Vec<usize>,
    /// One-based index of the studied eigenvalue.
    #[arg(long, default_value_t = 1)]
    index: usize,
    #[command(flatten)]
    solve: SolveArgs,
    #[command(flatten)]
    out: OutputArgs,
}

/// Outcome of argument parsing.
#[derive(Debug)]
pub enum Parsed {
    Run(Box<RunConfig>),
    /// `--help` or `--version`: text for standard output.
    Info(String),
    Usage(String),
}

fn empty(command: CommandKind, dim: usize, out: OutputArgs, threads: usize) -> RunConfig {
    RunConfig {
        command,
        dim,
        extent: Vec::new(),
        cells: Vec::new(),
        degree: None,
        problem: None,
        count: None,
        radius: None,
        gamma: None,
        resolutions: Vec::new(),
        index: None,
        tolerance: DEFAULT_TOLERANCE,
        threads,
        output: out.output,
        format: out.format,
    }
}

/// Reads the thread cap from `value` (the environment variable's content).
pub fn parse_threads(value: Option<&str>) -> Result<usize> {
    match value {
        None => Ok(1),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::InvalidInput(format!("{THREADS_ENV} must be an integer >= 1, got `{s}`"))),
        },
    }
}

fn check_tolerance(tol: f64) -> Result<f64> {
    if tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(Error::InvalidInput(format!("tolerance must lie in (0, 1), got {tol}")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
    }
}

fn validate(command: Command, threads: usize) -> Result<RunConfig> {
    let config = match command {
        Command::Ball(a) => {
            if a.dim < 2 || a.dim > MAX_BALL_DIM {
                return Err(Error::InvalidInput(format!("ball dimension must lie in 2..={MAX_BALL_DIM}, got {}", a.dim)));
            }
            RunConfig {
                radius: Some(check_positive("radius", a.radius)?),
                ..empty(CommandKind::Ball, a.dim as usize, a.out, threads)
            }
        }
        Command::Box(a) => {
            let kind: ProblemKind = a.problem.parse()?;
            let config = RunConfig {
                extent: a.extent,
                cells: a.cells,
                degree: Some(a.degree),
                problem: Some(ProblemKindName(kind.name().into())),
                count: Some(a.count),
                tolerance: check_tolerance(a.solve.tol)?,
                ..empty(CommandKind::Box, a.dim, a.out, threads)
            };
            let domain = config.domain()?;
            if a.degree > domain.dim() {
                return Err(Error::InvalidInput(format!("degree {} exceeds dimension {}", a.degree, domain.dim())));
            }
            if a.count == 0 {
                return Err(Error::InvalidInput("count must be >= 1".into()));
            }
            config
        }
        Command::Verify(a) => {
            let config = RunConfig {
                extent: a.extent,
                cells: a.cells,
                count: Some(a.count),
                gamma: Some(check_positive("gamma", a.gamma)?),
                tolerance: check_tolerance(a.solve.tol)?,
                ..empty(CommandKind::Verify, a.dim, a.out, threads)
            };
            config.domain()?;
            if a.count < hodge_spectra::verify::STUDIED_VALUES {
                return Err(Error::InvalidInput(format!(
                    "verify needs count >= {}",
                    hodge_spectra::verify::STUDIED_VALUES
                )));
            }
            config
        }
        Command::Constants(a) => {
            hodge_spectra::verify::evaluate_constants(a.dim, a.degree, a.gamma)?;
            RunConfig {
                degree: Some(a.degree as usize),
                gamma: Some(a.gamma),
                ..empty(CommandKind::Constants, a.dim as usize, a.out, threads)
            }
        }
        Command::Converge(a) => {
            let kind: ProblemKind = a.problem.parse()?;
            if a.resolutions.len() < 3 || a.resolutions.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput("resolutions must be at least three strictly increasing counts".into()));
            }
            let coarsest = vec![a.resolutions[0]; a.extent.len()];
            build_domain(a.dim, &a.extent, &coarsest)?;
            if a.degree > a.dim {
                return Err(Error::InvalidInput(format!("degree {} exceeds dimension {}", a.degree, a.dim)));
            }
            if a.index == 0 {
                return Err(Error::InvalidInput("index is one-based".into()));
            }
            RunConfig {
                extent: a.extent,
                degree: Some(a.degree),
                problem: Some(ProblemKindName(kind.name().into())),
                resolutions: a.resolutions,
                index: Some(a.index),
                tolerance: check_tolerance(a.solve.tol)?,
                ..empty(CommandKind::Converge, a.dim, a.out, threads)
            }
        }
    };
    Ok(config)
}

/// Parses and validates `argv` (program name first).
pub fn parse_args<I, T>(argv: I, threads_env: Option<&str>) -> Parsed
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Parsed::Info(e.to_string())
                }
                _ => Parsed::Usage(e.to_string()),
            }
        }
    };
    let threads = match parse_threads(threads_env) {
        Ok(t) => t,
        Err(e) => return Parsed::Usage(e.to_string()),
    };
    match validate(cli.command, threads) {
        Ok(config) => Parsed::Run(Box::new(config)),
        Err(e) => Parsed::Usage(e.to_string()),
    }
}
