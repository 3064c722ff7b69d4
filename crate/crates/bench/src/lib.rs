//! Benchmark fixtures shared by the criterion targets.

use bosent::optics::{photon_pair, FitOptions, HomTruth};
use bosent::SingleParticleState;

/// Photon pair at the given angle with overlap `o`.
pub fn pair(theta_deg: f64, o: f64) -> (SingleParticleState, SingleParticleState) {
    photon_pair(theta_deg, o).expect("valid overlap")
}

/// Noiseless HOM scan with `n` points over +-300 um.
pub fn hom_scan(n: usize) -> Vec<(f64, f64)> {
    let truth = HomTruth::new(22.5, 0.91, 137.0).expect("valid truth");
    (0..n)
        .map(|i| {
            let l = -300.0 + 600.0 * i as f64 / (n - 1) as f64;
            (l, 1000.0 * truth.rate(l).expect("valid rate"))
        })
        .collect()
}

pub fn default_fit() -> FitOptions {
    FitOptions::default()
}
