//! Command-line front end: parses a run request, computes spectra or checks
//! and writes a JSON or CSV report.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a numerical or I/O
//! failure (a partial report is still written when possible).

pub mod config;
pub mod report;

use std::collections::BTreeMap;
use std::io::Write;

use hodge_spectra::eigensolve::SolverConfig;
use hodge_spectra::verify::{
    box_battery, check_inequalities, convergence_study_at, evaluate_constants, BatteryOptions, CheckStatus,
    SpectrumSet,
};
use hodge_spectra::{assemble, ball_spectrum, solve_form, Error};

pub use config::{parse_args, CommandKind, OutputFormat, Parsed, RunConfig, THREADS_ENV};
pub use report::{emit_report, render, CheckRecord, ConstantsRecord, Meta, Report, RunStatus, SpectrumRecord, StudyRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("hodge-spectra".to_string(), hodge_spectra::VERSION.to_string()),
        ("hodge-spectra-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ])
}

fn solver_config(config: &RunConfig) -> SolverConfig {
    SolverConfig { threads: config.threads, ..SolverConfig::with_tol(config.tolerance) }
}

fn constants_for(dim: usize, gamma: f64) -> BTreeMap<String, ConstantsRecord> {
    let mut out = BTreeMap::new();
    for p in 1..=dim / 2 {
        if let Ok(bundle) = evaluate_constants(dim as u32, p as u32, gamma) {
            let record = ConstantsRecord::from(&bundle);
            out.insert(record.key(), record);
        }
    }
    out
}

fn domain_source(config: &RunConfig) -> String {
    let cells: Vec<String> = config.cells.iter().map(|c| c.to_string()).collect();
    format!("box {}", cells.join("x"))
}

/// Runs a validated request. Arguments the library rejects come back as
/// [`Error::InvalidInput`] or [`Error::Domain`].
pub fn execute(config: &RunConfig) -> Result<Report, Error> {
    let mut report = Report {
        meta: Meta {
            command: config.command.name().to_string(),
            config: config.clone(),
            versions: versions(),
            status: RunStatus::Ok,
            error: None,
        },
        spectra: Vec::new(),
        checks: Vec::new(),
        constants: BTreeMap::new(),
        studies: Vec::new(),
    };
    match config.command {
        CommandKind::Ball => {
            let ball = ball_spectrum(config.dim as u32, config.radius.unwrap_or(1.0))?;
            let source = format!("ball n={} R={}", ball.dim, ball.radius);
            let set = SpectrumSet::from_ball(&ball)?;
            for (kind, p, entry) in set.entries() {
                report.spectra.push(SpectrumRecord {
                    label: format!("{}[p={p}] {source}", kind.symbol()),
                    degree: p,
                    kind: kind.name().to_string(),
                    values: entry.values.clone(),
                    residuals: Vec::new(),
                });
            }
            report.checks = check_inequalities(&set)
                .checks
                .iter()
                .filter(|c| c.status != CheckStatus::Skipped)
                .map(CheckRecord::from)
                .collect();
        }
        CommandKind::Box => {
            let domain = config.domain()?;
            let problem = assemble(&domain, config.degree.unwrap_or(0), config.problem_kind()?)?;
            let spectrum = solve_form(&problem, config.count.unwrap_or(3), &solver_config(config))?;
            report.spectra.push(SpectrumRecord::from_spectrum(&spectrum, &domain_source(config)));
        }
        CommandKind::Verify => {
            let domain = config.domain()?;
            let gamma = config.gamma.unwrap_or(1.0);
            let options = BatteryOptions { count: config.count.unwrap_or(3), gamma, ..BatteryOptions::default() };
            let battery = box_battery(&domain, &options, &solver_config(config))?;
            let source = domain_source(config);
            report.spectra = battery.spectra.iter().map(|s| SpectrumRecord::from_spectrum(s, &source)).collect();
            report.checks = battery.report.checks.iter().map(CheckRecord::from).collect();
            report.studies = battery.studies.iter().map(StudyRecord::from).collect();
            report.constants = constants_for(config.dim, gamma);
        }
        CommandKind::Constants => {
            let gamma = config.gamma.unwrap_or(1.0);
            let degree = config.degree.unwrap_or(1) as u32;
            let bundle = evaluate_constants(config.dim as u32, degree, gamma)?;
            let record = ConstantsRecord::from(&bundle);
            report.constants.insert(record.key(), record);
            let set = SpectrumSet::new(config.dim, true)?.with_gamma(gamma)?;
            report.checks = check_inequalities(&set)
                .checks
                .iter()
                .filter(|c| {
                    let applies = c.status != CheckStatus::Skipped && c.name.ends_with(&format!("[p={degree}]"));
                    applies || c.name == "SphereHalfDegreeIdentity"
                })
                .map(CheckRecord::from)
                .collect();
        }
        CommandKind::Converge => {
            let index = config.index.unwrap_or(1) - 1;
            let study = convergence_study_at(
                &config.extent,
                config.problem_kind()?,
                config.degree.unwrap_or(0),
                index,
                &config.resolutions,
                &solver_config(config),
            )?;
            report.studies.push(StudyRecord::from(&study));
        }
    }
    if report.checks.iter().any(|c| c.status == CheckStatus::Fail.as_str()) {
        report.meta.status = RunStatus::ChecksFailed;
    }
    Ok(report)
}

/// Report carrying a numerical failure and whatever partial spectrum it holds.
fn partial_report(config: &RunConfig, error: &Error) -> Report {
    let mut spectra = Vec::new();
    if let Error::NonConvergence { partial, .. } = error {
        spectra.push(SpectrumRecord::from_spectrum(partial, &domain_source(config)));
    }
    Report {
        meta: Meta {
            command: config.command.name().to_string(),
            config: config.clone(),
            versions: versions(),
            status: RunStatus::Partial,
            error: Some(error.to_string()),
        },
        spectra,
        checks: Vec::new(),
        constants: BTreeMap::new(),
        studies: Vec::new(),
    }
}

/// Full pipeline with explicit streams; used by the binary and the tests.
pub fn run_with<I, T>(argv: I, threads_env: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_args(argv, threads_env) {
        Parsed::Run(config) => config,
        Parsed::Info(text) => {
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
        Parsed::Usage(text) => {
            let _ = writeln!(stderr, "{}", text.trim_end());
            return EXIT_USAGE;
        }
    };
    let (report, code) = match execute(&config) {
        Ok(report) => (report, EXIT_OK),
        Err(e) if e.is_numerical() => {
            let _ = writeln!(stderr, "error: {e}");
            (partial_report(&config, &e), EXIT_FAILURE)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = render(&report, config.format).and_then(|bytes| match &config.output {
        Some(path) => std::fs::write(path, bytes),
        None => stdout.write_all(&bytes),
    });
    match written {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot write report: {e}");
            EXIT_FAILURE
        }
    }
}

/// Runs the command line `argv` against the process streams and environment.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let threads = std::env::var(THREADS_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, threads.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}
