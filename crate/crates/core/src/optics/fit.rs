//! Gaussian dip and peak fitting.
//!
//! Model: `y(l) = baseline - depth * exp(-(l - center)^2 / (2 w^2))`, fitted
//! by Levenberg-Marquardt damped Gauss-Newton. Steps are accepted only when
//! the objective does not increase.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};

/// `2 sqrt(2 ln 2)`: FWHM of a Gaussian in units of its standard deviation.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

/// How residuals are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Ordinary least squares.
    #[default]
    Uniform,
    /// Poisson maximum likelihood: minimizes the deviance with Fisher-scoring
    /// weights `1 / model`. Data must be nonnegative counts.
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub weighting: Weighting,
    pub max_iterations: usize,
    /// Relative step size below which the fit counts as converged.
    pub step_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            weighting: Weighting::Uniform,
            max_iterations: 200,
            step_tol: 1e-10,
        }
    }
}

/// One-sigma uncertainties from the curvature of the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipStdErr {
    pub baseline: f64,
    pub depth: f64,
    pub center_um: f64,
    pub fwhm_um: f64,
    pub visibility: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipFit {
    pub baseline: f64,
    pub depth: f64,
    pub center_um: f64,
    /// Gaussian standard deviation `w`.
    pub width_um: f64,
    pub fwhm_um: f64,
    /// `depth / baseline`.
    pub visibility: f64,
    /// Final objective: sum of squared residuals, or the Poisson deviance.
    pub residual: f64,
    /// Objective after the initial guess and after every accepted step.
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub stderr: Option<DipStdErr>,
}

const PARAMS: usize = 4;

struct Problem<'a> {
    l: &'a [f64],
    y: &'a [f64],
    weighting: Weighting,
}

impl Problem<'_> {
    fn model(p: &[f64; PARAMS], l: f64) -> (f64, f64) {
        let [b, a, c, w] = *p;
        let g = (-(l - c) * (l - c) / (2.0 * w * w)).exp();
        (b - a * g, g)
    }

    fn objective(&self, p: &[f64; PARAMS]) -> Option<f64> {
        if p[3] == 0.0 || p.iter().any(|x| !x.is_finite()) {
            return None;
        }
        let mut total = 0.0;
        for (&l, &y) in self.l.iter().zip(self.y) {
            let (f, _) = Self::model(p, l);
            total += match self.weighting {
                Weighting::Uniform => (y - f) * (y - f),
                Weighting::Poisson => {
                    if f <= 0.0 {
                        return None;
                    }
                    let log_term = if y > 0.0 { y * (y / f).ln() } else { 0.0 };
                    2.0 * (f - y + log_term)
                }
            };
        }
        Some(total)
    }

    /// Normal-equation matrix `J^T W J` and gradient `J^T W (y - f)`.
    fn normal_equations(&self, p: &[f64; PARAMS]) -> (Matrix4<f64>, Vector4<f64>) {
        let [_, a, c, w] = *p;
        let mut h = Matrix4::zeros();
        let mut g = Vector4::zeros();
        for (&l, &y) in self.l.iter().zip(self.y) {
            let (f, gauss) = Self::model(p, l);
            let u = l - c;
            let j = Vector4::new(
                1.0,
                -gauss,
                -a * gauss * u / (w * w),
                -a * gauss * u * u / (w * w * w),
            );
            let weight = match self.weighting {
                Weighting::Uniform => 1.0,
                Weighting::Poisson => 1.0 / f.max(f64::MIN_POSITIVE),
            };
            h += j * j.transpose() * weight;
            g += j * (weight * (y - f));
        }
        (h, g)
    }
}

fn initial_guess(l: &[f64], y: &[f64]) -> Result<[f64; PARAMS]> {
    let n = l.len();
    let k = ((n as f64 * 0.1).round() as usize).max(1);
    let outer: Vec<f64> = y[..k].iter().chain(&y[n - k..]).copied().collect();
    let baseline = outer.iter().sum::<f64>() / outer.len() as f64;

    let (imin, &ymin) = y
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let depth = baseline - ymin;
    if !(depth > 1e-9 * baseline.abs().max(f64::MIN_POSITIVE)) {
        return Err(Error::NoDipDetected);
    }

    let half = baseline - 0.5 * depth;
    let cross = |j: usize, i: usize| {
        // linear interpolation of the half-depth crossing between samples j and i
        let t = (half - y[i]) / (y[j] - y[i]);
        l[i] + t * (l[j] - l[i])
    };
    let left = (0..imin)
        .rev()
        .find(|&j| y[j] >= half)
        .map(|j| cross(j, j + 1));
    let right = (imin + 1..n)
        .find(|&j| y[j] >= half)
        .map(|j| cross(j, j - 1));
    let center = l[imin];
    let span = l[n - 1] - l[0];
    let fwhm = match (left, right) {
        (Some(a), Some(b)) => b - a,
        (Some(a), None) => 2.0 * (center - a),
        (None, Some(b)) => 2.0 * (b - center),
        (None, None) => span / 4.0,
    };
    let w = if fwhm > 0.0 {
        fwhm / FWHM_PER_SIGMA
    } else {
        span / 10.0
    };
    Ok([baseline, depth, center, w])
}

fn finish(
    problem: &Problem<'_>,
    p: [f64; PARAMS],
    residual_history: Vec<f64>,
    iterations: usize,
) -> DipFit {
    let [baseline, depth, center_um, w] = p;
    let width_um = w.abs();
    let n = problem.l.len();
    let (h, _) = problem.normal_equations(&p);
    let residual = *residual_history
        .last()
        .expect("history starts with the initial objective");
    let scale = match problem.weighting {
        Weighting::Poisson => Some(1.0),
        Weighting::Uniform if n > PARAMS => Some(residual / (n - PARAMS) as f64),
        Weighting::Uniform => None,
    };
    let stderr = scale.zip(h.try_inverse()).map(|(s, cov)| {
        let cov = cov * s;
        let var_v = (cov[(1, 1)] / (baseline * baseline))
            + (depth * depth * cov[(0, 0)] / baseline.powi(4))
            - 2.0 * depth * cov[(0, 1)] / baseline.powi(3);
        DipStdErr {
            baseline: cov[(0, 0)].max(0.0).sqrt(),
            depth: cov[(1, 1)].max(0.0).sqrt(),
            center_um: cov[(2, 2)].max(0.0).sqrt(),
            fwhm_um: FWHM_PER_SIGMA * cov[(3, 3)].max(0.0).sqrt(),
            visibility: var_v.max(0.0).sqrt(),
        }
    });
    DipFit {
        baseline,
        depth,
        center_um,
        width_um,
        fwhm_um: FWHM_PER_SIGMA * width_um,
        visibility: depth / baseline,
        residual,
        residual_history,
        iterations,
        stderr,
    }
}

/// Fits a Gaussian dip by ordinary least squares.
pub fn fit_gaussian_dip(points: &[(f64, f64)]) -> Result<DipFit> {
    fit_gaussian_dip_with(points, &FitOptions::default())
}

pub fn fit_gaussian_dip_with(points: &[(f64, f64)], opts: &FitOptions) -> Result<DipFit> {
    if points.len() < 5 {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: format!("need at least 5 points, got {}", points.len()),
        });
    }
    if points.iter().any(|(l, y)| !l.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: "non-finite value".into(),
        });
    }
    if opts.weighting == Weighting::Poisson && points.iter().any(|&(_, y)| y < 0.0) {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: "negative count under Poisson weighting".into(),
        });
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (l, y): (Vec<f64>, Vec<f64>) = sorted.into_iter().unzip();

    let problem = Problem {
        l: &l,
        y: &y,
        weighting: opts.weighting,
    };
    let mut p = initial_guess(&l, &y)?;
    let mut obj = problem.objective(&p).ok_or(Error::NoDipDetected)?;
    let mut history = vec![obj];
    let mut lambda = 1e-3;

    for iter in 1..=opts.max_iterations {
        let (h, g) = problem.normal_equations(&p);
        let mut step = None;
        while lambda <= 1e16 {
            let mut damped = h;
            for i in 0..PARAMS {
                damped[(i, i)] += lambda * h[(i, i)].max(1e-300);
            }
            let Some(delta) = damped.lu().solve(&g) else {
                lambda *= 10.0;
                continue;
            };
            let cand = [
                p[0] + delta[0],
                p[1] + delta[1],
                p[2] + delta[2],
                p[3] + delta[3],
            ];
            match problem.objective(&cand) {
                Some(c) if c <= obj => {
                    step = Some((cand, delta.norm()));
                    lambda = (lambda / 10.0).max(1e-12);
                    break;
                }
                _ => lambda *= 10.0,
            }
        }
        // no downhill step at any damping: stationary to machine precision
        let Some((cand, step_norm)) = step else {
            return checked(finish(&problem, p, history, iter), opts);
        };
        let p_norm = Vector4::from(p).norm();
        p = cand;
        obj = problem.objective(&p).expect("accepted step is valid");
        history.push(obj);
        if step_norm <= opts.step_tol * (p_norm + opts.step_tol) {
            return checked(finish(&problem, p, history, iter), opts);
        }
    }
    Err(Error::FitNotConverged {
        iterations: opts.max_iterations,
        best: Box::new(finish(&problem, p, history, opts.max_iterations)),
    })
}

fn checked(fit: DipFit, opts: &FitOptions) -> Result<DipFit> {
    if !(fit.depth > 0.0) {
        return Err(Error::NoDipDetected);
    }
    if opts.weighting == Weighting::Poisson {
        if let Some(se) = fit.stderr {
            if fit.depth < 3.0 * se.depth {
                return Err(Error::NoDipDetected);
            }
        }
    }
    Ok(fit)
}

/// Gaussian peak `offset + amplitude * exp(-(l - center)^2 / (2 w^2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPeakFit {
    pub offset: f64,
    pub amplitude: f64,
    pub center_um: f64,
    pub width_um: f64,
    pub fwhm_um: f64,
    pub residual: f64,
}

/// Fits a Gaussian peak by ordinary least squares (a dip fit of `-y`).
pub fn fit_gaussian_peak(points: &[(f64, f64)]) -> Result<GaussianPeakFit> {
    let flipped: Vec<(f64, f64)> = points.iter().map(|&(l, y)| (l, -y)).collect();
    let dip = fit_gaussian_dip(&flipped)?;
    Ok(GaussianPeakFit {
        offset: -dip.baseline,
        amplitude: dip.depth,
        center_um: dip.center_um,
        width_um: dip.width_um,
        fwhm_um: dip.fwhm_um,
        residual: dip.residual,
    })
}

/// Least-squares amplitude of `C = c0 sin^2 4 theta` over `(theta_deg, C)` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sin2Fit {
    pub c0: f64,
    /// Largest absolute residual.
    pub max_residual: f64,
}

pub fn fit_sin2_amplitude(points: &[(f64, f64)]) -> Result<Sin2Fit> {
    let s = |theta_deg: f64| super::sin2_4theta(theta_deg);
    let den: f64 = points.iter().map(|&(t, _)| s(t) * s(t)).sum();
    if !(den > 0.0) {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: "no sample with nonzero sin^2 4 theta".into(),
        });
    }
    let c0 = points.iter().map(|&(t, c)| c * s(t)).sum::<f64>() / den;
    let max_residual = points
        .iter()
        .map(|&(t, c)| (c - c0 * s(t)).abs())
        .fold(0.0, f64::max);
    Ok(Sin2Fit { c0, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dip(baseline: f64, visibility: f64, fwhm: f64, center: f64) -> Vec<(f64, f64)> {
        let w = fwhm / FWHM_PER_SIGMA;
        (-30..=30)
            .map(|k| {
                let l = k as f64 * 10.0;
                let g = (-(l - center) * (l - center) / (2.0 * w * w)).exp();
                (l, baseline * (1.0 - visibility * g))
            })
            .collect()
    }

    #[test]
    fn fwhm_constant() {
        assert!((FWHM_PER_SIGMA - 2.0 * (2.0 * std::f64::consts::LN_2).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn recovers_noiseless_dip() {
        let f = fit_gaussian_dip(&dip(1000.0, 0.99, 132.0, 0.0)).unwrap();
        assert!((f.fwhm_um / 132.0 - 1.0).abs() < 1e-6);
        assert!((f.visibility / 0.99 - 1.0).abs() < 1e-6);
        assert!((f.baseline / 1000.0 - 1.0).abs() < 1e-6);
        assert!(f.center_um.abs() < 1e-6);
    }

    #[test]
    fn recovers_off_center_dip_with_poisson_weights() {
        let f = fit_gaussian_dip_with(
            &dip(1000.0, 0.91, 137.0, 12.5),
            &FitOptions {
                weighting: Weighting::Poisson,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((f.fwhm_um / 137.0 - 1.0).abs() < 1e-6);
        assert!((f.visibility / 0.91 - 1.0).abs() < 1e-6);
        assert!((f.center_um - 12.5).abs() < 1e-6);
    }

    #[test]
    fn residual_never_increases() {
        // rough data so several iterations happen
        let mut pts = dip(1000.0, 0.8, 120.0, 5.0);
        for (k, p) in pts.iter_mut().enumerate() {
            p.1 += if k % 2 == 0 { 7.0 } else { -5.0 };
        }
        let f = fit_gaussian_dip(&pts).unwrap();
        assert!(f.residual_history.len() > 1);
        assert!(f.residual_history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn flat_line_has_no_dip() {
        let pts: Vec<(f64, f64)> = (0..20).map(|k| (k as f64, 500.0)).collect();
        assert_eq!(fit_gaussian_dip(&pts).unwrap_err(), Error::NoDipDetected);
    }

    #[test]
    fn too_few_points() {
        let pts = vec![(0.0, 1.0), (1.0, 0.5), (2.0, 1.0)];
        assert!(matches!(
            fit_gaussian_dip(&pts),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn iteration_cap_reports_best_parameters() {
        let opts = FitOptions {
            max_iterations: 1,
            ..Default::default()
        };
        let mut pts = dip(1000.0, 0.5, 80.0, 30.0);
        pts[3].1 += 40.0;
        match fit_gaussian_dip_with(&pts, &opts) {
            Err(Error::FitNotConverged { iterations, best }) => {
                assert_eq!(iterations, 1);
                assert!(best.residual <= best.residual_history[0]);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn fits_gaussian_peak() {
        let sigma = 59.45;
        let pts: Vec<(f64, f64)> = (-30..=30)
            .map(|k| {
                let l = k as f64 * 10.0;
                (l, 0.75 * (-l * l / (2.0 * sigma * sigma)).exp())
            })
            .collect();
        let f = fit_gaussian_peak(&pts).unwrap();
        assert!((f.width_um / sigma - 1.0).abs() < 1e-6);
        assert!((f.amplitude - 0.75).abs() < 1e-6);
        assert!(f.offset.abs() < 1e-6);
    }

    #[test]
    fn sin2_amplitude() {
        let pts: Vec<(f64, f64)> = (0..=18)
            .map(|k| {
                let t = k as f64 * 2.5;
                (t, 0.4 * super::super::sin2_4theta(t))
            })
            .collect();
        let f = fit_sin2_amplitude(&pts).unwrap();
        assert!((f.c0 - 0.4).abs() < 1e-14);
        assert!(f.max_residual < 1e-15);
        assert!(fit_sin2_amplitude(&[(0.0, 0.0), (90.0, 0.0)]).is_ok_and(|f| f.c0 == 0.0));
        assert!(fit_sin2_amplitude(&[(0.0, 0.0)]).is_err());
    }
}
