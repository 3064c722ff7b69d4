//! Command-line front end for `bosent`: point evaluation, sweeps, HOM scans
//! and the verification suite.

// `!(x > 0.0)` is deliberate: NaN must fail these checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod grid;
pub mod hom;
pub mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bosent::optics::{concurrence_optical, OverlapConvention};
use bosent::verify::{run_verification, VerifyConfig};
use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, Format, HomArgs, OutputArgs, PointArgs, SweepArgs, VerifyArgs};
use hom::{cmd_hom, HomConfig, HomOutcome};
use sweep::{cmd_sweep, evaluate_point, SweepConfig, SweepRow, COLUMNS, NOISY_COLUMNS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(bosent::Error),
    Io(io::Error),
    VerificationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) | CliError::Io(_) => EXIT_NUMERICAL,
            CliError::VerificationFailed => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(bosent::Error::NoDipDetected) => write!(f, "no dip detected"),
            CliError::Numerical(e) => write!(f, "numerical error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::VerificationFailed => write!(f, "verification failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<bosent::Error> for CliError {
    fn from(e: bosent::Error) -> Self {
        match e {
            bosent::Error::InvalidParameter { .. } | bosent::Error::OverlapOutOfRange(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Numerical(e),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn check_finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be finite")))
    }
}

fn sigma(point: &PointArgs) -> Result<f64, CliError> {
    if let Some(d) = point.width.delta {
        if !(d > 0.0 && d.is_finite()) {
            return Err(CliError::Usage(format!(
                "--delta must be positive, got {d}"
            )));
        }
    }
    let s = point.width.sigma();
    if !(s > 0.0 && s.is_finite()) {
        return Err(CliError::Usage(format!(
            "--sigma-um must be positive, got {s}"
        )));
    }
    Ok(s)
}

/// Floats in shortest round-trip form, independent of locale.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[derive(Serialize)]
struct Metadata<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    config: &'a C,
}

#[derive(Serialize)]
struct JsonDoc<'a, C: Serialize, R: Serialize, F: Serialize> {
    metadata: Metadata<'a, C>,
    rows: &'a [R],
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<F>,
}

fn with_output<F>(out: &OutputArgs, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match &out.out {
        Some(path) => write_file(path, body),
        None => body(stdout),
    }
}

fn write_file<F>(path: &Path, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_csv(w: &mut dyn Write, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    csv.write_record(header)?;
    for r in rows {
        csv.write_record(r.iter().map(|&v| fmt_f64(v)))?;
    }
    csv.flush()?;
    Ok(())
}

fn write_json<C: Serialize, R: Serialize, F: Serialize>(
    w: &mut dyn Write,
    doc: &JsonDoc<'_, C, R, F>,
) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, doc)?;
    writeln!(w)?;
    Ok(())
}

fn cmd_concurrence(a: &PointArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_finite("theta-deg", a.theta_deg)?;
    check_finite("delay-um", a.delay_um)?;
    let sigma_um = sigma(a)?;
    let convention: OverlapConvention = a.overlap_convention.into();
    let row = evaluate_point(a.theta_deg, a.delay_um, sigma_um, convention)?;
    let c = concurrence_optical(a.theta_deg, a.delay_um, sigma_um);
    let lines = [
        ("theta_deg", row.theta_deg),
        ("delay_um", row.delay_um),
        ("sigma_um", sigma_um),
        ("spatial_overlap", row.spatial_overlap),
        ("overlap_paper", row.overlap_paper),
        ("overlap_quadrature", row.overlap_quadrature),
        ("C", c),
        ("c_closed_form", row.c_closed_form),
        ("c_wootters_normalized", row.c_wootters_normalized),
        ("e_p", row.e_p),
    ];
    for (k, v) in lines {
        writeln!(stdout, "{k} = {v:.6}")?;
    }
    Ok(())
}

pub fn sweep_config(a: &SweepArgs) -> Result<SweepConfig, CliError> {
    let grid = |spec: &Option<String>, single: f64, name: &str| match spec {
        Some(s) => grid::parse_grid(s).map_err(|e| CliError::Usage(format!("--{name}: {e}"))),
        None => check_finite(name, single).map(|_| vec![single]),
    };
    Ok(SweepConfig {
        theta_grid: grid(&a.theta_grid, a.point.theta_deg, "theta-grid")?,
        delay_grid: grid(&a.delay_grid, a.point.delay_um, "delay-grid")?,
        sigma_um: sigma(&a.point)?,
        convention: a.point.overlap_convention.into(),
        shots: a.run.shots,
        runs: a.run.runs,
        seed: a.run.seed,
        noisy: a.noisy,
    })
}

fn run_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = sweep_config(a)?;
    let rows = cmd_sweep(&cfg)?;
    with_output(&a.output, stdout, |w| match a.output.format {
        Format::Csv => {
            let mut header: Vec<&str> = COLUMNS.to_vec();
            if cfg.noisy {
                header.extend(NOISY_COLUMNS);
            }
            let values: Vec<Vec<f64>> = rows.iter().map(SweepRow::fields).collect();
            write_csv(w, &header, &values)
        }
        Format::Json => write_json(
            w,
            &JsonDoc::<_, _, ()> {
                metadata: Metadata {
                    tool: "bosent",
                    version: env!("CARGO_PKG_VERSION"),
                    command: "sweep",
                    seed: cfg.seed,
                    config: &cfg,
                },
                rows: &rows,
                fit: None,
            },
        ),
    })
}

fn run_hom(a: &HomArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = HomConfig {
        theta_deg: a.theta_deg,
        visibility: a.visibility,
        fwhm_um: a.fwhm_um,
        baseline: a.baseline,
        delay_grid: grid::parse_grid(&a.delay_grid)
            .map_err(|e| CliError::Usage(format!("--delay-grid: {e}")))?,
        runs: a.runs,
        seed: a.seed,
        noisy: a.noisy,
    };
    let HomOutcome { data, report } = cmd_hom(&cfg)?;
    let fit = report.as_ref().ok();
    // data goes out before a fit failure is reported
    let data_to_stdout = a.output.out.is_none();
    with_output(&a.output, stdout, |w| match a.output.format {
        Format::Csv => {
            let values: Vec<Vec<f64>> = data
                .iter()
                .map(|p| vec![p.delay_um, p.expected, p.counts])
                .collect();
            write_csv(w, &["delay_um", "expected", "counts"], &values)
        }
        Format::Json => write_json(
            w,
            &JsonDoc {
                metadata: Metadata {
                    tool: "bosent",
                    version: env!("CARGO_PKG_VERSION"),
                    command: "hom",
                    seed: cfg.seed,
                    config: &cfg,
                },
                rows: &data,
                fit,
            },
        ),
    })?;
    let r = report?;
    if data_to_stdout && a.output.format == Format::Json {
        return Ok(());
    }
    let pm = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"));
    writeln!(stdout, "visibility = {:.6}", r.visibility)?;
    writeln!(stdout, "visibility_stderr = {}", pm(r.visibility_stderr))?;
    writeln!(
        stdout,
        "visibility_mc_stddev = {}",
        pm(r.visibility_mc_stddev)
    )?;
    writeln!(stdout, "fwhm_um = {:.6}", r.fwhm_um)?;
    writeln!(stdout, "fwhm_stderr_um = {}", pm(r.fwhm_stderr_um))?;
    writeln!(stdout, "fwhm_mc_stddev_um = {}", pm(r.fwhm_mc_stddev_um))?;
    writeln!(stdout, "center_um = {:.6}", r.center_um)?;
    Ok(())
}

fn run_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let cfg = VerifyConfig {
        trials: a.trials,
        seed: a.seed,
        tolerance_scale: if a.corrupt_tolerance { -1.0 } else { 1.0 },
    };
    let report = run_verification(&cfg)?;
    for s in &report.suites {
        let status = if s.passed() { "PASS" } else { "FAIL" };
        writeln!(
            stdout,
            "{status} {:<48} trials={} max_dev={:.3e} tol={:.1e}",
            s.name, s.trials, s.max_deviation, s.tolerance
        )?;
    }
    for m in &report.reports {
        writeln!(stdout, "info {:<48} {:.6e}", m.name, m.value)?;
    }
    writeln!(stdout, "max deviation = {:.3e}", report.max_deviation())?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Concurrence(a) => cmd_concurrence(a, stdout),
        Command::Sweep(a) => run_sweep(a, stdout),
        Command::Hom(a) => run_hom(a, stdout),
        Command::Verify(a) => run_verify(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "bosent: {e}");
            e.exit_code()
        }
    }
}
