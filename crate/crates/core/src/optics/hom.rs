//! Two-photon interference at the recombining beam displacer.

use num_complex::Complex64;

use super::{photon_pair, FWHM_PER_SIGMA};
use crate::error::{Error, Result};
use crate::oracle;
use crate::state::{Mode, EXACT_TOL};

/// Diagonal-basis polarization analyzer: outcome bras `<+|` and `<-|` over (up, down).
fn diagonal_analyzer() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn coincidence_at_r(theta_deg: f64, overlap: f64) -> Result<f64> {
    let (a, b) = photon_pair(theta_deg, overlap)?;
    let state = oracle::symmetrize(&a, &b)?;
    Ok(oracle::oracle_coincidence(
        &state,
        Mode::R,
        diagonal_analyzer(),
    ))
}

/// Interference visibility of the merge at R for the input set by `theta_deg`,
/// computed by enumerating two-photon outcomes of the labeled tensor:
/// `1 - P(coincidence | overlap 1) / P(coincidence | overlap 0)`. Zero when
/// the two photons never meet at R.
pub fn hom_visibility_model(theta_deg: f64) -> Result<f64> {
    let distinguishable = coincidence_at_r(theta_deg, 0.0)?;
    if distinguishable <= EXACT_TOL {
        return Ok(0.0);
    }
    let indistinguishable = coincidence_at_r(theta_deg, 1.0)?;
    Ok(1.0 - indistinguishable / distinguishable)
}

/// Coincidence rate `baseline * (1 - V(theta) * overlap^2)`.
pub fn hom_coincidence(theta_deg: f64, overlap: f64, baseline: f64) -> Result<f64> {
    if !(-EXACT_TOL..=1.0 + EXACT_TOL).contains(&overlap) {
        return Err(Error::OverlapOutOfRange(overlap));
    }
    if !(baseline > 0.0) {
        return Err(Error::InvalidParameter {
            name: "baseline",
            reason: format!("must be positive, got {baseline}"),
        });
    }
    let v = hom_visibility_model(theta_deg)?;
    Ok(baseline * (1.0 - v * overlap * overlap))
}

/// Ground truth for a simulated HOM scan: a Gaussian dip of the given
/// visibility and FWHM, centred at zero delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomTruth {
    pub theta_deg: f64,
    pub visibility: f64,
    pub fwhm_um: f64,
}

impl HomTruth {
    pub fn new(theta_deg: f64, visibility: f64, fwhm_um: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::InvalidParameter {
                name: "visibility",
                reason: format!("must lie in [0, 1], got {visibility}"),
            });
        }
        if !(fwhm_um > 0.0) {
            return Err(Error::InvalidParameter {
                name: "fwhm_um",
                reason: format!("must be positive, got {fwhm_um}"),
            });
        }
        Ok(Self {
            theta_deg,
            visibility,
            fwhm_um,
        })
    }

    /// Distinguishability overlap at delay `l`: the peak overlap is
    /// `sqrt(visibility)` so the dip depth matches the requested visibility.
    pub fn overlap(&self, l_um: f64) -> f64 {
        let w = self.fwhm_um / FWHM_PER_SIGMA;
        self.visibility.sqrt() * (-l_um * l_um / (4.0 * w * w)).exp()
    }

    /// Coincidence rate relative to the non-interfering level.
    pub fn rate(&self, l_um: f64) -> Result<f64> {
        hom_coincidence(self.theta_deg, self.overlap(l_um), 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_merge_has_unit_visibility() {
        assert!((hom_visibility_model(22.5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_overlap_angle_has_no_interference() {
        assert_eq!(hom_visibility_model(0.0).unwrap(), 0.0);
    }

    #[test]
    fn perfect_dip_and_flat_baseline() {
        assert!(hom_coincidence(22.5, 1.0, 500.0).unwrap().abs() < 1e-9);
        assert!((hom_coincidence(22.5, 0.0, 500.0).unwrap() - 500.0).abs() < 1e-12);
    }

    #[test]
    fn half_overlap_squared_halves_coincidences() {
        // direct enumeration of the labeled two-photon outcomes
        let o = std::f64::consts::FRAC_1_SQRT_2;
        let ratio = coincidence_at_r(22.5, o).unwrap() / coincidence_at_r(22.5, 0.0).unwrap();
        assert!((ratio - 0.5).abs() < 1e-12);
        assert!((hom_coincidence(22.5, o, 800.0).unwrap() - 400.0).abs() < 1e-9);
    }

    #[test]
    fn out_of_range_inputs() {
        assert!(matches!(
            hom_coincidence(22.5, 1.5, 1.0),
            Err(Error::OverlapOutOfRange(_))
        ));
        assert!(hom_coincidence(22.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn truth_curve_depth_and_width() {
        let t = HomTruth::new(22.5, 0.91, 137.0).unwrap();
        assert!((t.rate(0.0).unwrap() - 0.09).abs() < 1e-12);
        // half depth at l = FWHM / 2
        assert!((t.rate(68.5).unwrap() - (1.0 - 0.455)).abs() < 1e-12);
    }
}
