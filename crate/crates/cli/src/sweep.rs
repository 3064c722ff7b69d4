//! Point evaluation and (theta, delay) sweeps.

use bosent::optics::{
    concurrence_at, estimate_concurrence, expected_tomography_counts, gaussian_overlap,
    monte_carlo_errorbars, photon_pair, pipeline_overlap, sin2_4theta, ExperimentParams,
    OverlapConvention,
};
use bosent::{
    entanglement_of_particles, number_distribution, postselected_spin_state, wootters_concurrence,
};
use serde::Serialize;

use crate::CliError;

/// CSV header, in output order.
pub const COLUMNS: [&str; 8] = [
    "theta_deg",
    "delay_um",
    "spatial_overlap",
    "overlap_paper",
    "overlap_quadrature",
    "c_closed_form",
    "c_wootters_normalized",
    "e_p",
];
pub const NOISY_COLUMNS: [&str; 2] = ["c_mc_mean", "c_mc_stddev"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub theta_grid: Vec<f64>,
    pub delay_grid: Vec<f64>,
    pub sigma_um: f64,
    #[serde(serialize_with = "convention_name")]
    pub convention: OverlapConvention,
    pub shots: u64,
    pub runs: usize,
    pub seed: u64,
    pub noisy: bool,
}

fn convention_name<S: serde::Serializer>(c: &OverlapConvention, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match c {
        OverlapConvention::Paper => "paper",
        OverlapConvention::Quadrature => "quadrature",
    })
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.theta_grid.is_empty() || self.delay_grid.is_empty() {
            return Err(CliError::Usage("grids must be non-empty".into()));
        }
        let params = ExperimentParams {
            sigma_um: self.sigma_um,
            shots: self.shots,
            runs: self.runs,
            seed: self.seed,
            ..ExperimentParams::default()
        };
        params
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if self.noisy && self.runs < 2 {
            return Err(CliError::Usage("--noisy needs --runs of at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta_deg: f64,
    pub delay_um: f64,
    pub spatial_overlap: f64,
    pub overlap_paper: f64,
    pub overlap_quadrature: f64,
    pub c_closed_form: f64,
    pub c_wootters_normalized: f64,
    pub e_p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_mc_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_mc_stddev: Option<f64>,
}

impl SweepRow {
    pub fn fields(&self) -> Vec<f64> {
        let mut v = vec![
            self.theta_deg,
            self.delay_um,
            self.spatial_overlap,
            self.overlap_paper,
            self.overlap_quadrature,
            self.c_closed_form,
            self.c_wootters_normalized,
            self.e_p,
        ];
        v.extend(self.c_mc_mean);
        v.extend(self.c_mc_stddev);
        v
    }
}

/// Noiseless quantities at one grid point.
pub fn evaluate_point(
    theta_deg: f64,
    delay_um: f64,
    sigma_um: f64,
    convention: OverlapConvention,
) -> Result<SweepRow, CliError> {
    let delta = 1.0 / (2.0 * sigma_um);
    let o = pipeline_overlap(delay_um, sigma_um, convention);
    let (pa, pb) = photon_pair(theta_deg, o)?;
    let rho = postselected_spin_state(&pa, &pb)?;
    Ok(SweepRow {
        theta_deg,
        delay_um,
        spatial_overlap: sin2_4theta(theta_deg),
        overlap_paper: gaussian_overlap(delay_um, OverlapConvention::Paper, delta),
        overlap_quadrature: gaussian_overlap(delay_um, OverlapConvention::Quadrature, delta),
        c_closed_form: concurrence_at(theta_deg, delay_um, sigma_um, convention)?,
        c_wootters_normalized: wootters_concurrence(&rho, true)?,
        e_p: entanglement_of_particles(&number_distribution(&pa, &pb)?)?,
        c_mc_mean: None,
        c_mc_stddev: None,
    })
}

/// Monte Carlo concurrence from Poisson-resampled tomography counts.
fn monte_carlo_point(row: &SweepRow, cfg: &SweepConfig, seed: u64) -> Result<(f64, f64), CliError> {
    let o = pipeline_overlap(row.delay_um, cfg.sigma_um, cfg.convention);
    let (pa, pb) = photon_pair(row.theta_deg, o)?;
    let rho = postselected_spin_state(&pa, &pb)?;
    let expected = expected_tomography_counts(&rho, cfg.shots)?;
    let params = ExperimentParams {
        theta_deg: row.theta_deg,
        delay_um: row.delay_um,
        sigma_um: cfg.sigma_um,
        shots: cfg.shots,
        seed,
        runs: cfg.runs,
    };
    let summary = monte_carlo_errorbars(&params, &expected, |counts| {
        let c: Vec<f64> = counts.iter().map(|&n| n as f64).collect();
        estimate_concurrence(&c)
    })?;
    Ok((summary.mean, summary.stddev))
}

/// One row per grid point, theta-major. The Monte Carlo seed of row `i` is
/// `seed + i`, so rows are independent of evaluation order.
pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.theta_grid.len() * cfg.delay_grid.len());
    for &theta in &cfg.theta_grid {
        for &l in &cfg.delay_grid {
            let mut row = evaluate_point(theta, l, cfg.sigma_um, cfg.convention)?;
            if cfg.noisy {
                let seed = cfg.seed.wrapping_add(rows.len() as u64);
                let (mean, sd) = monte_carlo_point(&row, cfg, seed)?;
                row.c_mc_mean = Some(mean);
                row.c_mc_stddev = Some(sd);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(theta: Vec<f64>, delay: Vec<f64>) -> SweepConfig {
        SweepConfig {
            theta_grid: theta,
            delay_grid: delay,
            sigma_um: 59.45,
            convention: OverlapConvention::Paper,
            shots: 1000,
            runs: 100,
            seed: 7,
            noisy: false,
        }
    }

    #[test]
    fn maximal_point() {
        let r = evaluate_point(22.5, 0.0, 59.45, OverlapConvention::Paper).unwrap();
        assert!((r.c_closed_form - 1.0).abs() < 1e-12);
        assert!((r.c_wootters_normalized - 1.0).abs() < 1e-9);
        assert!((r.spatial_overlap - 1.0).abs() < 1e-15);
        assert!((r.e_p - 0.5).abs() < 1e-9);
    }

    #[test]
    fn theta_column_follows_sin2() {
        let thetas: Vec<f64> = (0..19).map(|i| 2.5 * i as f64).collect();
        let rows = cmd_sweep(&config(thetas, vec![0.0])).unwrap();
        assert_eq!(rows.len(), 19);
        for r in rows {
            assert!((r.c_closed_form - sin2_4theta(r.theta_deg)).abs() < 1e-12);
        }
    }

    #[test]
    fn delay_section_decreases() {
        let rows = cmd_sweep(&config(vec![22.5], vec![0.0, 30.0, 60.0, 300.0])).unwrap();
        let c: Vec<f64> = rows.iter().map(|r| r.c_closed_form).collect();
        assert!(c.windows(2).all(|w| w[1] < w[0]));
        assert!(c[3] < 1e-5);
    }

    #[test]
    fn noisy_rows_carry_mc_columns() {
        let mut cfg = config(vec![22.5], vec![0.0, 70.0]);
        cfg.noisy = true;
        cfg.runs = 20;
        let rows = cmd_sweep(&cfg).unwrap();
        assert_eq!(rows[0].fields().len(), 10);
        let mean = rows[0].c_mc_mean.unwrap();
        assert!((mean - 1.0).abs() < 0.05, "{mean}");
        assert!(rows[1].c_mc_mean.unwrap() < mean);
    }

    #[test]
    fn empty_grid_is_usage_error() {
        assert!(matches!(
            cmd_sweep(&config(vec![], vec![0.0])),
            Err(CliError::Usage(_))
        ));
    }
}
