//! `ladderlab` command line: spectra, verification suites and parameter
//! sweeps written as JSON or CSV reports.
//!
//! Exit codes: 0 pass, 1 verification failure (report still written),
//! 2 configuration error, 3 I/O error.

pub mod config;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use ladderlab::dirac::{do_dense_check, DOParams};
use ladderlab::guard::GuardBand;
use ladderlab::jc::{jc_dense_check, JCParams};
use ladderlab::spectrum::SpectrumCheck;
use ladderlab::suite::{dirac2d_suite, do_suite, jc_suite, SuiteReport};
use ladderlab::{AngularLattice, CompositeSpace, OpError};

use config::{grid_points, parse_params, Format, ModelKind, RunConfig};
use report::{CheckRow, PointSummary, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<OpError> for CliError {
    fn from(e: OpError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "ladderlab", version, about = "Spectra and operator-algebra checks for dressed spin-boson models")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form spectrum against dense diagonalization
    Spectrum(RunArgs),
    /// Full verification suite; exit code 1 if any check fails
    Verify(RunArgs),
    /// Verification over a parameter grid (comma-separated values)
    Sweep(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long, default_value_t = config::DEFAULT_N_MAX)]
    nmax: usize,
    #[arg(long, default_value_t = config::DEFAULT_GUARD)]
    guard: usize,
    #[arg(long, default_value_t = config::DEFAULT_TOL)]
    tol: f64,
    /// KEY=VALUE; keys m, omega (do), omega, Omega, J (jc), lmin, lmax (dirac2d)
    #[arg(long = "param", num_args = 1.., value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Report path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl RunArgs {
    fn config(&self, allow_lists: bool) -> Result<RunConfig, CliError> {
        let cfg = RunConfig {
            model: self.model,
            params: parse_params(self.model, &self.params, allow_lists)?,
            n_max: self.nmax,
            guard: self.guard,
            tolerance: self.tol,
            format: self.format,
            out: self.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn do_params(p: &BTreeMap<String, f64>) -> Result<DOParams, CliError> {
    Ok(DOParams::new(p["m"], p["omega"])?)
}

fn jc_params(p: &BTreeMap<String, f64>) -> Result<JCParams, CliError> {
    Ok(JCParams::new(p["omega"], p["Omega"], p["J"])?)
}

fn lattice(p: &BTreeMap<String, f64>) -> Result<AngularLattice, CliError> {
    let int = |key: &str| {
        let v = p[key];
        if v.fract() != 0.0 || v.abs() > 1e6 {
            return Err(CliError::Config(format!("`{key}` must be an integer, got {v}")));
        }
        Ok(v as i64)
    };
    Ok(AngularLattice::new(int("lmin")?, int("lmax")?)?)
}

fn suite_at(cfg: &RunConfig, p: &BTreeMap<String, f64>) -> Result<SuiteReport, CliError> {
    Ok(match cfg.model {
        ModelKind::Do => do_suite(do_params(p)?, cfg.n_max, cfg.guard, cfg.tolerance)?,
        ModelKind::Jc => jc_suite(jc_params(p)?, cfg.n_max, cfg.guard, cfg.tolerance)?,
        ModelKind::Dirac2d => dirac2d_suite(lattice(p)?, cfg.guard)?,
    })
}

fn spectrum_at(cfg: &RunConfig, p: &BTreeMap<String, f64>) -> Result<SpectrumCheck, CliError> {
    let space = CompositeSpace::with_n_max(cfg.n_max)?;
    let guard = GuardBand::new(cfg.guard, cfg.n_max)?;
    match cfg.model {
        ModelKind::Do => Ok(do_dense_check(do_params(p)?, space, guard, cfg.tolerance)?),
        ModelKind::Jc => Ok(jc_dense_check(jc_params(p)?, space, guard, cfg.tolerance)?),
        ModelKind::Dirac2d => Err(CliError::Config(
            "model dirac2d has no energy spectrum; use `verify`".into(),
        )),
    }
}

fn empty_report(command: &'static str, cfg: RunConfig) -> Report {
    Report {
        command,
        config: cfg,
        pass: true,
        checks: Vec::new(),
        spectrum: Vec::new(),
        unmatched: Vec::new(),
        defects: Vec::new(),
        observables: BTreeMap::new(),
        matrix_elements: None,
        points: Vec::new(),
        duration_s: 0.0,
    }
}

fn cmd_spectrum(cfg: RunConfig) -> Result<Report, CliError> {
    let point = cfg.point();
    let levels = spectrum_at(&cfg, &point)?;
    let mut rep = empty_report("spectrum", cfg);
    rep.checks.push(CheckRow {
        name: "spectrum: closed form vs dense".into(),
        residual: levels.max_abs_diff(),
        tolerance: rep.config.tolerance,
        defect_rank: 0,
        defect_support: Vec::new(),
        pass: levels.pass,
    });
    rep.spectrum = report::spectrum_rows(&levels, None);
    rep.unmatched = report::unmatched_rows(&levels);
    rep.pass = levels.pass;
    Ok(rep)
}

fn cmd_verify(cfg: RunConfig) -> Result<Report, CliError> {
    let point = cfg.point();
    let suite = suite_at(&cfg, &point)?;
    let mut rep = empty_report("verify", cfg);
    rep.checks = suite.checks.iter().map(CheckRow::from).collect();
    rep.defects = report::defect_catalog(&rep.checks);
    if let Some(levels) = &suite.spectrum {
        rep.spectrum = report::spectrum_rows(levels, None);
        rep.unmatched = report::unmatched_rows(levels);
    }
    rep.observables = report::observables(&suite);
    rep.matrix_elements = suite.matrix_elements.as_ref().map(Into::into);
    rep.pass = suite.pass;
    Ok(rep)
}

/// Worst residual, largest defect and union of supports per check name.
fn aggregate(suites: &[SuiteReport]) -> Vec<CheckRow> {
    let mut out: Vec<CheckRow> = Vec::new();
    for s in suites {
        for c in &s.checks {
            match out.iter_mut().find(|r| r.name == c.name) {
                Some(r) => {
                    r.residual = r.residual.max(c.residual);
                    r.tolerance = r.tolerance.min(c.tolerance);
                    r.defect_rank = r.defect_rank.max(c.defect_rank);
                    for l in &c.defect_support {
                        if !r.defect_support.contains(l) {
                            r.defect_support.push(l.clone());
                        }
                    }
                    r.pass &= c.pass;
                }
                None => out.push(c.into()),
            }
        }
    }
    out
}

fn cmd_sweep(cfg: RunConfig) -> Result<Report, CliError> {
    let points = grid_points(&cfg.params);
    if points.is_empty() {
        return Err(CliError::Config("empty parameter grid".into()));
    }
    let suites = points
        .par_iter()
        .map(|p| suite_at(&cfg, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = empty_report("sweep", cfg);
    rep.checks = aggregate(&suites);
    rep.defects = report::defect_catalog(&rep.checks);
    for (p, s) in points.iter().zip(&suites) {
        if let Some(levels) = &s.spectrum {
            rep.spectrum.extend(report::spectrum_rows(levels, Some(p)));
        }
        rep.points.push(PointSummary {
            params: p.clone(),
            pass: s.pass,
            failed_checks: s.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect(),
            spectrum_max_abs_diff: s.spectrum.as_ref().map(|x| x.max_abs_diff()),
            observables: report::observables(s),
        });
    }
    rep.pass = suites.iter().all(|s| s.pass);
    Ok(rep)
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

/// `report.csv` → `report.checks.csv` next to it.
pub fn checks_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.checks.csv"))
}

fn write_report(rep: &Report) -> Result<(), CliError> {
    match (rep.config.format, &rep.config.out) {
        (Format::Json, out) => {
            let text = serde_json::to_string_pretty(rep).map_err(|e| CliError::Io(e.to_string()))? + "\n";
            match out {
                Some(path) => std::fs::write(path, text).map_err(|e| io_error(path, e)),
                None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
            }
        }
        (Format::Csv, Some(path)) => {
            report::write_spectrum_csv(&rep.spectrum, create(path)?)?;
            report::write_checks_csv(&rep.checks, create(&checks_path(path))?)
        }
        (Format::Csv, None) => {
            let mut stdout = io::stdout().lock();
            report::write_spectrum_csv(&rep.spectrum, &mut stdout)?;
            writeln!(stdout).map_err(|e| CliError::Io(e.to_string()))?;
            report::write_checks_csv(&rep.checks, &mut stdout)
        }
    }
}

/// Fail before any computation if the report could not be written.
fn check_out_dir(cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(path) = &cfg.out {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        if !dir.is_dir() {
            return Err(CliError::Io(format!("{}: output directory does not exist", dir.display())));
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let (cfg, cmd): (RunConfig, fn(RunConfig) -> Result<Report, CliError>) = match &cli.command {
        Command::Spectrum(a) => (a.config(false)?, cmd_spectrum),
        Command::Verify(a) => (a.config(false)?, cmd_verify),
        Command::Sweep(a) => (a.config(true)?, cmd_sweep),
    };
    check_out_dir(&cfg)?;
    let mut rep = cmd(cfg)?;
    rep.duration_s = start.elapsed().as_secs_f64();
    write_report(&rep)?;
    Ok(rep.pass)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            eprintln!("verification failed; see report");
            EXIT_FAIL
        }
        Err(e) => {
            eprintln!("ladderlab: {e}");
            e.exit_code()
        }
    }
}
