//! Poisson count simulation and Monte Carlo error bars.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::ExperimentParams;
use crate::entanglement::SpinDensityMatrix;
use crate::error::{Error, Result};

/// Simulated counts at each delay point.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    pub delays_um: Vec<f64>,
    pub counts: Vec<u64>,
}

impl CountTable {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.delays_um
            .iter()
            .zip(&self.counts)
            .map(|(&l, &n)| (l, n as f64))
            .collect()
    }
}

/// One Poisson draw; a zero mean always yields zero.
pub fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    // Poisson::new only fails for non-positive or non-finite means
    Poisson::new(mean).map_or(0, |p| p.sample(rng) as u64)
}

fn expected_counts<F>(params: &ExperimentParams, delays_um: &[f64], truth: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    delays_um
        .iter()
        .map(|&l| {
            let rate = truth(l)?;
            if !(rate >= 0.0) || !rate.is_finite() {
                return Err(Error::NegativeRate { delay_um: l, rate });
            }
            Ok(rate * params.shots as f64)
        })
        .collect()
}

/// Poisson counts with mean `truth(l) * shots` at every delay, drawn from a
/// generator seeded with `params.seed`.
pub fn simulate_counts<F>(
    params: &ExperimentParams,
    delays_um: &[f64],
    truth: F,
) -> Result<CountTable>
where
    F: Fn(f64) -> Result<f64>,
{
    params.validate()?;
    let means = expected_counts(params, delays_um, truth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok(CountTable {
        delays_um: delays_um.to_vec(),
        counts: means.iter().map(|&m| sample_poisson(&mut rng, m)).collect(),
    })
}

/// Mean and sample standard deviation of a Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub mean: f64,
    pub stddev: f64,
    pub values: Vec<f64>,
}

impl McSummary {
    pub fn from_values(values: Vec<f64>) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            stddev: var.sqrt(),
            values,
        }
    }
}

/// Re-draws Poisson counts around `expected` for `params.runs` runs, applies
/// `estimator` to each draw and summarizes the results.
pub fn monte_carlo_errorbars<F>(
    params: &ExperimentParams,
    expected: &[f64],
    mut estimator: F,
) -> Result<McSummary>
where
    F: FnMut(&[u64]) -> Result<f64>,
{
    if params.runs < 2 {
        return Err(Error::InvalidParameter {
            name: "runs",
            reason: format!("need at least 2 Monte Carlo runs, got {}", params.runs),
        });
    }
    if let Some(&m) = expected.iter().find(|m| !(**m >= 0.0) || !m.is_finite()) {
        return Err(Error::NegativeRate {
            delay_um: f64::NAN,
            rate: m,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut counts = vec![0u64; expected.len()];
    let mut values = Vec::with_capacity(params.runs);
    for run in 0..params.runs {
        for (c, &m) in counts.iter_mut().zip(expected) {
            *c = sample_poisson(&mut rng, m);
        }
        let v = estimator(&counts).map_err(|e| Error::EstimatorFailed {
            run,
            source: Box::new(e),
        })?;
        values.push(v);
    }
    Ok(McSummary::from_values(values))
}

/// Local Pauli measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Eigenvectors for outcomes +1 (index 0) and -1 (index 1).
    fn eigenvectors(self) -> [[Complex64; 2]; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            Pauli::Z => [[r(1.0), r(0.0)], [r(0.0), r(1.0)]],
            Pauli::X => [[r(h), r(h)], [r(h), r(-h)]],
            Pauli::Y => [
                [r(h), Complex64::new(0.0, h)],
                [r(h), Complex64::new(0.0, -h)],
            ],
        }
    }
}

/// Pair of local bases for the L and R polarization analyzers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementSetting {
    pub left: Pauli,
    pub right: Pauli,
}

/// Settings that pin down the populations and the `|ud>, |du>` and
/// `|uu>, |dd>` coherences, which is all an X-shaped state carries.
pub const TOMOGRAPHY_SETTINGS: [MeasurementSetting; 5] = [
    MeasurementSetting {
        left: Pauli::Z,
        right: Pauli::Z,
    },
    MeasurementSetting {
        left: Pauli::X,
        right: Pauli::X,
    },
    MeasurementSetting {
        left: Pauli::Y,
        right: Pauli::Y,
    },
    MeasurementSetting {
        left: Pauli::X,
        right: Pauli::Y,
    },
    MeasurementSetting {
        left: Pauli::Y,
        right: Pauli::X,
    },
];

impl MeasurementSetting {
    /// Outcome probabilities `(++, +-, -+, --)` for a normalized matrix.
    pub fn probabilities(&self, rho: &Matrix4<Complex64>) -> [f64; 4] {
        let (l, r) = (self.left.eigenvectors(), self.right.eigenvectors());
        let mut p = [0.0; 4];
        for (k, pk) in p.iter_mut().enumerate() {
            let (u, v) = (l[k / 2], r[k % 2]);
            let ket = Vector4::new(u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]);
            *pk = (ket.adjoint() * rho * ket)[(0, 0)].re.max(0.0);
        }
        p
    }
}

/// Expected counts for every cell of [`TOMOGRAPHY_SETTINGS`], `shots` per setting.
pub fn expected_tomography_counts(rho: &SpinDensityMatrix, shots: u64) -> Result<Vec<f64>> {
    let m = rho.normalized()?;
    Ok(TOMOGRAPHY_SETTINGS
        .iter()
        .flat_map(|s| s.probabilities(&m))
        .map(|p| p * shots as f64)
        .collect())
}

/// Concurrence of the X-shaped two-qubit state reconstructed from
/// [`TOMOGRAPHY_SETTINGS`] counts:
/// `2 max(0, |r_ud,du| - sqrt(p_uu p_dd), |r_uu,dd| - sqrt(p_ud p_du))`.
pub fn estimate_concurrence(counts: &[f64]) -> Result<f64> {
    if counts.len() != 4 * TOMOGRAPHY_SETTINGS.len() {
        return Err(Error::InvalidParameter {
            name: "counts",
            reason: format!(
                "expected {} cells, got {}",
                4 * TOMOGRAPHY_SETTINGS.len(),
                counts.len()
            ),
        });
    }
    let mut freq = [[0.0; 4]; 5];
    for (s, cells) in counts.chunks(4).enumerate() {
        let total: f64 = cells.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "counts",
                reason: format!("no counts recorded for setting {s}"),
            });
        }
        for k in 0..4 {
            freq[s][k] = cells[k] / total;
        }
    }
    let corr = |s: usize| freq[s][0] - freq[s][1] - freq[s][2] + freq[s][3];
    let (xx, yy, xy, yx) = (corr(1), corr(2), corr(3), corr(4));
    let [p_uu, p_ud, p_du, p_dd] = freq[0];

    let inner = Complex64::new((xx + yy) / 4.0, (xy - yx) / 4.0);
    let outer = Complex64::new((xx - yy) / 4.0, -(xy + yx) / 4.0);
    let c = (inner.norm() - (p_uu * p_dd).sqrt()).max(outer.norm() - (p_ud * p_du).sqrt());
    Ok(2.0 * c.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{density_closed_form, wootters_concurrence};
    use crate::state::SpatialAmplitudes;

    #[test]
    fn zero_rate_gives_zero_counts() {
        let p = ExperimentParams::default();
        let t = simulate_counts(&p, &[0.0, 10.0, 20.0], |_| Ok(0.0)).unwrap();
        assert_eq!(t.counts, vec![0, 0, 0]);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = ExperimentParams {
            seed: 42,
            ..Default::default()
        };
        let delays: Vec<f64> = (0..20).map(|k| k as f64 * 5.0).collect();
        let a = simulate_counts(&p, &delays, |l| Ok(1.0 - 0.5 * (-l * l / 400.0).exp())).unwrap();
        let b = simulate_counts(&p, &delays, |l| Ok(1.0 - 0.5 * (-l * l / 400.0).exp())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn poisson_mean_is_unbiased() {
        let p = ExperimentParams {
            seed: 7,
            shots: 1000,
            ..Default::default()
        };
        let delays = vec![0.0; 10_000];
        let t = simulate_counts(&p, &delays, |_| Ok(1.0)).unwrap();
        let mean = t.counts.iter().sum::<u64>() as f64 / t.counts.len() as f64;
        assert!((mean - 1000.0).abs() < 3.0 * 1000f64.sqrt());
    }

    #[test]
    fn negative_rate_is_rejected() {
        let p = ExperimentParams::default();
        let err = simulate_counts(&p, &[1.0], |_| Ok(-0.1)).unwrap_err();
        assert!(matches!(err, Error::NegativeRate { .. }));
    }

    #[test]
    fn constant_estimator_has_no_spread() {
        let p = ExperimentParams {
            runs: 50,
            ..Default::default()
        };
        let s = monte_carlo_errorbars(&p, &[100.0, 200.0], |_| Ok(0.3)).unwrap();
        assert!(s.stddev < 1e-15);
        assert!((s.mean - 0.3).abs() < 1e-15);
        assert_eq!(s.values.len(), 50);
    }

    #[test]
    fn sample_mean_spread_matches_poisson() {
        let lambda = 100.0 * 1000.0;
        let p = ExperimentParams {
            runs: 100,
            seed: 3,
            ..Default::default()
        };
        let s = monte_carlo_errorbars(&p, &[lambda], |c| Ok(c[0] as f64)).unwrap();
        assert!((s.stddev - lambda.sqrt()).abs() < 0.2 * lambda.sqrt());
    }

    #[test]
    fn estimator_failure_reports_run() {
        let p = ExperimentParams {
            runs: 5,
            ..Default::default()
        };
        let mut calls = 0;
        let err = monte_carlo_errorbars(&p, &[1.0], |_| {
            calls += 1;
            if calls == 3 {
                Err(Error::NoDipDetected)
            } else {
                Ok(1.0)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::EstimatorFailed { run: 2, .. }));
    }

    #[test]
    fn single_run_is_rejected() {
        let p = ExperimentParams {
            runs: 1,
            ..Default::default()
        };
        assert!(monte_carlo_errorbars(&p, &[1.0], |_| Ok(0.0)).is_err());
    }

    #[test]
    fn noiseless_estimator_matches_wootters() {
        let cases = [
            (0.6, 0.8, 0.28, 0.96, 0.9),
            (1.0, 1.0, 1.0, 1.0, 1.0),
            (1.0, 0.0, 0.6, 0.8, 0.5),
            (0.3, 0.95393920, 0.8, 0.6, 0.0),
        ];
        for (al, ar, bl, br, o) in cases {
            let a = SpatialAmplitudes::normalized(al.into(), ar.into()).unwrap();
            let b = SpatialAmplitudes::normalized(bl.into(), br.into()).unwrap();
            let rho = density_closed_form(&a, &b, Complex64::new(o, 0.0));
            let expected = expected_tomography_counts(&rho, 1).unwrap();
            let est = estimate_concurrence(&expected).unwrap();
            let exact = wootters_concurrence(&rho, true).unwrap();
            assert!((est - exact).abs() < 1e-9, "{est} vs {exact}");
        }
    }

    #[test]
    fn estimator_handles_complex_coherence() {
        let a = SpatialAmplitudes::normalized(Complex64::new(0.3, 0.4), Complex64::new(0.1, -0.5))
            .unwrap();
        let b = SpatialAmplitudes::normalized(Complex64::new(-0.2, 0.6), Complex64::new(0.7, 0.0))
            .unwrap();
        let rho = density_closed_form(&a, &b, Complex64::new(0.5, 0.5));
        let est = estimate_concurrence(&expected_tomography_counts(&rho, 1).unwrap()).unwrap();
        assert!((est - wootters_concurrence(&rho, true).unwrap()).abs() < 1e-9);
    }
}
