//! Simulated HOM scans.

use bosent::optics::{
    fit_gaussian_dip_with, monte_carlo_errorbars, simulate_counts, DipFit, ExperimentParams,
    FitOptions, HomTruth, Weighting,
};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomConfig {
    pub theta_deg: f64,
    pub visibility: f64,
    pub fwhm_um: f64,
    pub baseline: u64,
    pub delay_grid: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    pub noisy: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomPoint {
    pub delay_um: f64,
    pub expected: f64,
    pub counts: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomReport {
    pub visibility: f64,
    pub fwhm_um: f64,
    pub center_um: f64,
    pub visibility_stderr: Option<f64>,
    pub fwhm_stderr_um: Option<f64>,
    pub visibility_mc_stddev: Option<f64>,
    pub fwhm_mc_stddev_um: Option<f64>,
    pub iterations: usize,
}

#[derive(Debug)]
pub struct HomOutcome {
    pub data: Vec<HomPoint>,
    /// `Err` when the fit (or its Monte Carlo) failed; the data is still valid.
    pub report: Result<HomReport, CliError>,
}

impl HomConfig {
    fn params(&self) -> ExperimentParams {
        ExperimentParams {
            theta_deg: self.theta_deg,
            shots: self.baseline,
            seed: self.seed,
            runs: self.runs,
            ..ExperimentParams::default()
        }
    }
}

fn fit_options(noisy: bool) -> FitOptions {
    FitOptions {
        weighting: if noisy {
            Weighting::Poisson
        } else {
            Weighting::Uniform
        },
        ..FitOptions::default()
    }
}

fn fit_report(cfg: &HomConfig, data: &[HomPoint]) -> Result<HomReport, CliError> {
    let points: Vec<(f64, f64)> = data.iter().map(|p| (p.delay_um, p.counts)).collect();
    let fit = fit_gaussian_dip_with(&points, &fit_options(cfg.noisy))?;
    let mut report = HomReport {
        visibility: fit.visibility,
        fwhm_um: fit.fwhm_um,
        center_um: fit.center_um,
        visibility_stderr: fit.stderr.map(|s| s.visibility),
        fwhm_stderr_um: fit.stderr.map(|s| s.fwhm_um),
        visibility_mc_stddev: None,
        fwhm_mc_stddev_um: None,
        iterations: fit.iterations,
    };
    if cfg.runs >= 2 {
        let expected: Vec<f64> = data.iter().map(|p| p.expected).collect();
        let refit = |counts: &[u64]| -> bosent::Result<DipFit> {
            let pts: Vec<(f64, f64)> = cfg
                .delay_grid
                .iter()
                .zip(counts)
                .map(|(&l, &n)| (l, n as f64))
                .collect();
            fit_gaussian_dip_with(&pts, &fit_options(true))
        };
        let params = cfg.params();
        let v = monte_carlo_errorbars(&params, &expected, |c| refit(c).map(|f| f.visibility))?;
        let w = monte_carlo_errorbars(&params, &expected, |c| refit(c).map(|f| f.fwhm_um))?;
        report.visibility_mc_stddev = Some(v.stddev);
        report.fwhm_mc_stddev_um = Some(w.stddev);
    }
    Ok(report)
}

/// Simulates the scan, then fits it. Invalid inputs are an outer error; a
/// failed fit is reported inside the outcome so the data can still be written.
pub fn cmd_hom(cfg: &HomConfig) -> Result<HomOutcome, CliError> {
    if cfg.delay_grid.is_empty() {
        return Err(CliError::Usage("delay grid must be non-empty".into()));
    }
    if cfg.baseline == 0 {
        return Err(CliError::Usage("baseline must be at least 1".into()));
    }
    let truth = HomTruth::new(cfg.theta_deg, cfg.visibility, cfg.fwhm_um)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let scale = cfg.baseline as f64;
    let expected = cfg
        .delay_grid
        .iter()
        .map(|&l| truth.rate(l).map(|r| r * scale))
        .collect::<bosent::Result<Vec<f64>>>()?;
    let counts: Vec<f64> = if cfg.noisy {
        let params = cfg.params();
        params
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let table = simulate_counts(&params, &cfg.delay_grid, |l| truth.rate(l))?;
        table.counts.iter().map(|&n| n as f64).collect()
    } else {
        expected.clone()
    };
    let data: Vec<HomPoint> = cfg
        .delay_grid
        .iter()
        .zip(expected.iter().zip(counts))
        .map(|(&delay_um, (&expected, counts))| HomPoint {
            delay_um,
            expected,
            counts,
        })
        .collect();
    let report = fit_report(cfg, &data);
    Ok(HomOutcome { data, report })
}
