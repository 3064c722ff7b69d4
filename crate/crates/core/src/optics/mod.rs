//! Photonic experiment model: waveplate-controlled spatial overlap, Gaussian
//! temporal wavepackets, HOM dips, Poisson count simulation and fitting.
//!
//! Delays are path lengths in micrometres; spectral widths are in inverse
//! micrometres with `sigma = 1 / (2 delta)`.

mod fit;
mod hom;
mod noise;
mod quadrature;

pub use fit::{
    fit_gaussian_dip, fit_gaussian_dip_with, fit_gaussian_peak, fit_sin2_amplitude, DipFit,
    DipStdErr, FitOptions, GaussianPeakFit, Sin2Fit, Weighting, FWHM_PER_SIGMA,
};
pub use hom::{hom_coincidence, hom_visibility_model, HomTruth};
pub use noise::{
    estimate_concurrence, expected_tomography_counts, monte_carlo_errorbars, sample_poisson,
    simulate_counts, CountTable, McSummary, MeasurementSetting, Pauli, TOMOGRAPHY_SETTINGS,
};
pub use quadrature::integrate;

use num_complex::Complex64;

use crate::entanglement::concurrence_closed_form;
use crate::error::{Error, Result};
use crate::state::{DistVector, SingleParticleState, SpatialAmplitudes, Spin};

/// Default concurrence width: FWHM 140 um divided by `2 sqrt(2 ln 2)`.
pub const DEFAULT_SIGMA_UM: f64 = 59.45;
/// Default number of Monte Carlo repetitions.
pub const DEFAULT_RUNS: usize = 100;

/// Which closed form to use for the overlap of two Gaussian wavepackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverlapConvention {
    /// Closed form `exp(-2 delta^2 l^2)`.
    #[default]
    Paper,
    /// Numerical integral of the two spectral amplitudes, `exp(-delta^2 l^2 / 2)`.
    Quadrature,
}

/// A Gaussian spectral wavepacket arriving with a given delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMode {
    pub arrival_um: f64,
    pub spectral_width: f64,
}

impl GaussianMode {
    pub fn new(arrival_um: f64, spectral_width: f64) -> Result<Self> {
        if !(spectral_width > 0.0 && spectral_width.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "spectral_width",
                reason: format!("must be positive, got {spectral_width}"),
            });
        }
        Ok(Self {
            arrival_um,
            spectral_width,
        })
    }

    /// Overlap with another wavepacket of the same width.
    pub fn overlap(&self, other: &Self, convention: OverlapConvention) -> f64 {
        gaussian_overlap(
            other.arrival_um - self.arrival_um,
            convention,
            self.spectral_width,
        )
    }
}

/// Inputs of one simulated measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentParams {
    pub theta_deg: f64,
    pub delay_um: f64,
    pub sigma_um: f64,
    /// Expected counts per unit rate (per delay point or measurement setting).
    pub shots: u64,
    pub seed: u64,
    pub runs: usize,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            theta_deg: 22.5,
            delay_um: 0.0,
            sigma_um: DEFAULT_SIGMA_UM,
            shots: 1000,
            seed: 0,
            runs: DEFAULT_RUNS,
        }
    }
}

impl ExperimentParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if !(self.sigma_um > 0.0 && self.sigma_um.is_finite()) {
            return bad(
                "sigma_um",
                format!("must be positive, got {}", self.sigma_um),
            );
        }
        if self.shots == 0 {
            return bad("shots", "must be at least 1".into());
        }
        if self.runs == 0 {
            return bad("runs", "must be at least 1".into());
        }
        if !self.theta_deg.is_finite() || !self.delay_um.is_finite() {
            return bad("theta_deg/delay_um", "must be finite".into());
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        delta_from_sigma(self.sigma_um)
    }
}

pub fn delta_from_sigma(sigma_um: f64) -> f64 {
    1.0 / (2.0 * sigma_um)
}

pub fn sigma_from_delta(delta: f64) -> f64 {
    1.0 / (2.0 * delta)
}

/// Spatial amplitudes set by the input half-waveplate angle:
/// `a_L = b_R = sin 2 theta`, `a_R = b_L = cos 2 theta`.
pub fn spatial_amplitudes_from_theta(theta_deg: f64) -> (SpatialAmplitudes, SpatialAmplitudes) {
    let t = 2.0 * theta_deg.to_radians();
    let (s, c) = t.sin_cos();
    let z = |x: f64| Complex64::new(x, 0.0);
    (
        SpatialAmplitudes {
            left: z(s),
            right: z(c),
        },
        SpatialAmplitudes {
            left: z(c),
            right: z(s),
        },
    )
}

/// `sin^2 4 theta`.
pub fn sin2_4theta(theta_deg: f64) -> f64 {
    (4.0 * theta_deg.to_radians()).sin().powi(2)
}

/// Overlap `<phi_A|phi_B>` of two Gaussian wavepackets separated by `l_um`.
pub fn gaussian_overlap(l_um: f64, convention: OverlapConvention, delta: f64) -> f64 {
    match convention {
        OverlapConvention::Paper => (-2.0 * delta * delta * l_um * l_um).exp(),
        OverlapConvention::Quadrature => quadrature::spectral_overlap(l_um, delta),
    }
}

/// `|<phi_A|phi_B>|` fed into the entanglement pipeline at delay `l_um`.
///
/// Under [`OverlapConvention::Paper`] the closed-form Gaussian is read as the squared
/// overlap, which makes the closed form reproduce the optical law
/// `sin^2 4 theta exp(-l^2 / 2 sigma^2)`. Under the quadrature convention the
/// integrated overlap is used as is.
pub fn pipeline_overlap(l_um: f64, sigma_um: f64, convention: OverlapConvention) -> f64 {
    let delta = delta_from_sigma(sigma_um);
    match convention {
        OverlapConvention::Paper => gaussian_overlap(l_um, convention, delta).sqrt(),
        OverlapConvention::Quadrature => gaussian_overlap(l_um, convention, delta).clamp(0.0, 1.0),
    }
}

/// `C = sin^2 4 theta exp(-l^2 / (2 sigma^2))`.
pub fn concurrence_optical(theta_deg: f64, l_um: f64, sigma_um: f64) -> f64 {
    assert!(sigma_um > 0.0, "sigma_um must be positive");
    sin2_4theta(theta_deg) * (-l_um * l_um / (2.0 * sigma_um * sigma_um)).exp()
}

/// The two photons of the setup as particle states, photon A carrying spin
/// up and photon B spin down, with distinguishability overlap `overlap`.
pub fn photon_pair(
    theta_deg: f64,
    overlap: f64,
) -> Result<(SingleParticleState, SingleParticleState)> {
    let (alphas, betas) = spatial_amplitudes_from_theta(theta_deg);
    let (phi_a, phi_b) = DistVector::pair_with_overlap(Complex64::new(overlap, 0.0))?;
    Ok((
        SingleParticleState::new(alphas, Spin::Up, phi_a),
        SingleParticleState::new(betas, Spin::Down, phi_b),
    ))
}

/// Closed-form concurrence at a setup point, using [`pipeline_overlap`].
pub fn concurrence_at(
    theta_deg: f64,
    l_um: f64,
    sigma_um: f64,
    convention: OverlapConvention,
) -> Result<f64> {
    let (alphas, betas) = spatial_amplitudes_from_theta(theta_deg);
    let o = pipeline_overlap(l_um, sigma_um, convention);
    concurrence_closed_form(&alphas, &betas, Complex64::new(o, 0.0))
}
