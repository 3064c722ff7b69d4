use bosent::optics::{
    concurrence_optical, estimate_concurrence, expected_tomography_counts, fit_gaussian_dip_with,
    monte_carlo_errorbars, photon_pair, simulate_counts, ExperimentParams, FitOptions, HomTruth,
    Weighting,
};
use bosent::postselected_spin_state;

fn delays() -> Vec<f64> {
    (0..=60).map(|i| -300.0 + 10.0 * i as f64).collect()
}

#[test]
fn noisy_fwhm_within_five_percent() {
    let opts = FitOptions {
        weighting: Weighting::Poisson,
        ..FitOptions::default()
    };
    for (v, fwhm) in [(0.99, 132.0), (0.91, 137.0)] {
        let truth = HomTruth::new(22.5, v, fwhm).unwrap();
        let good = (0..100)
            .filter(|&seed| {
                let params = ExperimentParams {
                    shots: 1000,
                    seed,
                    ..ExperimentParams::default()
                };
                let table = simulate_counts(&params, &delays(), |l| truth.rate(l)).unwrap();
                fit_gaussian_dip_with(&table.points(), &opts)
                    .is_ok_and(|f| (f.fwhm_um - fwhm).abs() <= 0.05 * fwhm)
            })
            .count();
        assert!(good >= 95, "V={v}: {good} of 100");
    }
}

#[test]
fn monte_carlo_concurrence_at_maximum() {
    let (a, b) = photon_pair(22.5, 1.0).unwrap();
    let rho = postselected_spin_state(&a, &b).unwrap();
    let params = ExperimentParams::default();
    let expected = expected_tomography_counts(&rho, params.shots).unwrap();
    let s = monte_carlo_errorbars(&params, &expected, |counts| {
        estimate_concurrence(&counts.iter().map(|&n| n as f64).collect::<Vec<_>>())
    })
    .unwrap();
    assert_eq!(s.values.len(), 100);
    assert!(s.stddev > 0.0);
    assert!(
        (s.mean - 1.0).abs() <= 3.0 * s.stddev,
        "{} +- {}",
        s.mean,
        s.stddev
    );
}

#[test]
fn monte_carlo_tracks_reduced_overlap() {
    // C = |o|^2 at the balanced angle
    let (a, b) = photon_pair(22.5, 0.6f64.sqrt()).unwrap();
    let rho = postselected_spin_state(&a, &b).unwrap();
    let params = ExperimentParams {
        shots: 5000,
        seed: 4,
        ..ExperimentParams::default()
    };
    let expected = expected_tomography_counts(&rho, params.shots).unwrap();
    let s = monte_carlo_errorbars(&params, &expected, |counts| {
        estimate_concurrence(&counts.iter().map(|&n| n as f64).collect::<Vec<_>>())
    })
    .unwrap();
    let sem = s.stddev / (s.values.len() as f64).sqrt();
    // small allowance for the O(1/shots) bias of the nonlinear estimator
    assert!(
        (s.mean - 0.6).abs() <= 4.0 * sem + 1e-3,
        "{} +- {}",
        s.mean,
        sem
    );
}

#[test]
fn poisson_spread_of_a_sample_mean_estimator() {
    let lambda = 100.0 * 10.0;
    let params = ExperimentParams {
        seed: 8,
        ..ExperimentParams::default()
    };
    let s = monte_carlo_errorbars(&params, &[lambda], |c| Ok(c[0] as f64)).unwrap();
    assert!((s.stddev / lambda.sqrt() - 1.0).abs() < 0.2, "{}", s.stddev);
}

#[test]
fn optical_law_symmetries() {
    let sigma = 59.45;
    for i in 0..40 {
        let theta = -30.0 + 2.3 * i as f64;
        for l in [0.0, 15.0, 70.0, 210.0] {
            let c = concurrence_optical(theta, l, sigma);
            assert!((c - concurrence_optical(theta, -l, sigma)).abs() < 1e-15);
            assert!((c - concurrence_optical(theta + 45.0, l, sigma)).abs() < 1e-12);
            let at_max = ((theta - 22.5) / 45.0).fract().abs() < 1e-12 && l == 0.0;
            assert!(at_max || c < 1.0 - 1e-6, "theta={theta} l={l} c={c}");
        }
    }
    assert!((concurrence_optical(22.5, 0.0, sigma) - 1.0).abs() < 1e-15);
    assert!((concurrence_optical(67.5, 0.0, sigma) - 1.0).abs() < 1e-12);
}
