//! Oracle-equivalence and invariant suites, run on random draws.
//!
//! Each suite records the largest deviation it saw and compares it against
//! its tolerance. Reports are informational measurements that are printed
//! but never fail.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entanglement::{
    concurrence_closed_form, density_closed_form, entanglement_of_particles, number_distribution,
    postselected_spin_state, wootters_concurrence,
};
use crate::error::{Error, Result};
use crate::nolabel::{
    expand_in_detector_basis, postselect_one_per_detector, project_single, transition_two,
};
use crate::optics::{
    concurrence_at, concurrence_optical, gaussian_overlap, photon_pair,
    spatial_amplitudes_from_theta, OverlapConvention,
};
use crate::oracle;
use crate::sampling::{random_overlap, random_particle, random_spatial, random_spin};
use crate::state::{inner_single, DistVector, SingleParticleState, Spin, EXACT_TOL, PIPELINE_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    /// Multiplies every tolerance. Anything other than 1 is a test hook.
    pub tolerance_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            tolerance_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        // a negative tolerance (including -0.0) never passes
        !self.tolerance.is_sign_negative() && self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
    pub reports: Vec<Measurement>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.suites
            .iter()
            .map(|s| s.max_deviation)
            .fold(0.0, f64::max)
    }
}

struct Runner {
    rng: ChaCha8Rng,
    trials: usize,
    scale: f64,
    report: VerifyReport,
}

impl Runner {
    fn suite<F>(&mut self, name: &'static str, tolerance: f64, mut trial: F) -> Result<()>
    where
        F: FnMut(&mut ChaCha8Rng, usize) -> Result<f64>,
    {
        let mut worst: f64 = 0.0;
        for k in 0..self.trials {
            let dev = trial(&mut self.rng, k)?;
            // NaN must fail the suite
            worst = if dev.is_nan() {
                f64::INFINITY
            } else {
                worst.max(dev)
            };
        }
        self.report.suites.push(SuiteResult {
            name,
            trials: self.trials,
            max_deviation: worst,
            tolerance: tolerance * self.scale,
        });
        Ok(())
    }

    fn measure(&mut self, name: &'static str, value: f64) {
        self.report.reports.push(Measurement { name, value });
    }
}

/// Distinguishability dimension cycles through 1, 2, 3.
fn dim(k: usize) -> usize {
    1 + k % 3
}

fn pair_up_down(rng: &mut ChaCha8Rng, d: usize) -> (SingleParticleState, SingleParticleState) {
    (
        random_particle(rng, Spin::Up, d),
        random_particle(rng, Spin::Down, d),
    )
}

fn any_particle(rng: &mut ChaCha8Rng, d: usize) -> SingleParticleState {
    let s = random_spin(rng);
    random_particle(rng, s, d)
}

/// Runs every suite with `trials` random draws each.
pub fn run_verification(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    let mut r = Runner {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        trials: cfg.trials,
        scale: cfg.tolerance_scale,
        report: VerifyReport::default(),
    };

    r.suite(
        "inner_single vs slot tensor contraction",
        EXACT_TOL,
        |rng, k| {
            let (x, y) = (any_particle(rng, dim(k)), any_particle(rng, dim(k)));
            let direct = inner_single(&x, &y)?;
            let tensor =
                oracle::single_slot_inner(&oracle::single_slot(&x), &oracle::single_slot(&y))?;
            let sym = (direct - inner_single(&y, &x)?.conj()).norm();
            Ok((direct - tensor).norm().max(sym))
        },
    )?;

    r.suite("transition_two vs labeled_inner", EXACT_TOL, |rng, k| {
        let d = dim(k);
        let [a, b, c, e] = [0; 4].map(|_| any_particle(rng, d));
        let rule = transition_two((&c, &e), (&a, &b))?;
        let brute =
            oracle::labeled_inner(&oracle::symmetrize(&c, &e)?, &oracle::symmetrize(&a, &b)?)?;
        Ok((rule - brute).norm())
    })?;

    r.suite("project_single vs slot contraction", EXACT_TOL, |rng, k| {
        let d = dim(k);
        let [a, b, c] = [0; 3].map(|_| any_particle(rng, d));
        let residual = project_single(&c, (&a, &b))?.to_slot_vector();
        let brute = oracle::oracle_project_single(&c, &oracle::symmetrize(&a, &b)?)?;
        Ok(residual
            .iter()
            .zip(&brute)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    })?;

    r.suite("transition norm vs tensor norm", EXACT_TOL, |rng, k| {
        let d = dim(k);
        let (a, b) = (any_particle(rng, d), any_particle(rng, d));
        let t = transition_two((&a, &b), (&a, &b))?;
        let n = oracle::symmetrize(&a, &b)?.norm_sqr();
        let expected = 1.0 + inner_single(&a, &b)?.norm_sqr();
        Ok((t.re - n)
            .abs()
            .max(t.im.abs())
            .max((n - expected).abs())
            .max((-t.re).max(0.0)))
    })?;

    r.suite("symmetrize swap invariance", 0.0, |rng, k| {
        let d = dim(k);
        let (a, b) = (any_particle(rng, d), any_particle(rng, d));
        let s = oracle::symmetrize(&a, &b)?;
        let exact = if s == oracle::symmetrize(&b, &a)? {
            0.0
        } else {
            f64::INFINITY
        };
        Ok(exact.max(s.max_abs_diff(&s.swapped())?))
    })?;

    r.suite(
        "detector expansion vs symmetrized tensor",
        EXACT_TOL,
        |rng, k| {
            let (a, b) = pair_up_down(rng, dim(k));
            let expanded = expand_in_detector_basis(&a, &b)?.to_labeled()?;
            expanded.max_abs_diff(&oracle::symmetrize(&a, &b)?)
        },
    )?;

    r.suite("post-selection idempotent", 0.0, |rng, k| {
        let (a, b) = pair_up_down(rng, dim(k));
        let once = postselect_one_per_detector(&expand_in_detector_basis(&a, &b)?);
        Ok(if postselect_one_per_detector(&once) == once {
            0.0
        } else {
            f64::INFINITY
        })
    })?;

    r.suite("traced density vs oracle density", EXACT_TOL, |rng, k| {
        let (a, b) = pair_up_down(rng, dim(k));
        let rho = postselected_spin_state(&a, &b)?;
        let brute = oracle::oracle_postselected_density(&oracle::symmetrize(&a, &b)?);
        rho.validate()?;
        Ok(rho.max_abs_diff(&brute))
    })?;

    r.suite(
        "closed-form density vs oracle density",
        EXACT_TOL,
        |rng, k| {
            let (a, b) = pair_up_down(rng, dim(k));
            let overlap = a.dist.inner(&b.dist)?;
            let closed = density_closed_form(&a.spatial, &b.spatial, overlap);
            let brute = oracle::oracle_postselected_density(&oracle::symmetrize(&a, &b)?);
            Ok(closed.max_abs_diff(&brute))
        },
    )?;

    r.suite(
        "closed form = 2 x unnormalized Wootters",
        PIPELINE_TOL,
        |rng, _| {
            let (alpha, beta, o) = (
                random_spatial(rng),
                random_spatial(rng),
                random_overlap(rng),
            );
            let rho = density_closed_form(&alpha, &beta, o);
            let raw = wootters_concurrence(&rho, false)?;
            let direct =
                2.0 * (alpha.left * beta.right * alpha.right * beta.left).norm() * o.norm_sqr();
            Ok((concurrence_closed_form(&alpha, &beta, o)? - 2.0 * raw)
                .abs()
                .max((raw - direct).abs()))
        },
    )?;

    r.suite(
        "balanced normalized Wootters = |overlap|^2",
        PIPELINE_TOL,
        |rng, _| {
            let (alpha, beta) = spatial_amplitudes_from_theta(22.5);
            let o = random_overlap(rng);
            let rho = density_closed_form(&alpha, &beta, o);
            let c = wootters_concurrence(&rho, true)?;
            let closed = concurrence_closed_form(&alpha, &beta, o)?;
            Ok((c - closed).abs().max((c - o.norm_sqr()).abs()))
        },
    )?;

    r.suite("closed form monotone in overlap", 0.0, |rng, _| {
        let (alpha, beta) = (random_spatial(rng), random_spatial(rng));
        let (x, y): (f64, f64) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0));
        let (lo, hi) = (x.min(y), x.max(y));
        let c_lo = concurrence_closed_form(&alpha, &beta, Complex64::new(lo, 0.0))?;
        let c_hi = concurrence_closed_form(&alpha, &beta, Complex64::new(hi, 0.0))?;
        Ok((c_lo - c_hi).max(0.0))
    })?;

    r.suite(
        "optical law = closed form with splice",
        EXACT_TOL,
        |rng, _| {
            let theta = rng.gen_range(0.0..90.0);
            let l = rng.gen_range(-300.0..300.0);
            let sigma = rng.gen_range(20.0..120.0);
            Ok((concurrence_optical(theta, l, sigma)
                - concurrence_at(theta, l, sigma, OverlapConvention::Paper)?)
            .abs())
        },
    )?;

    r.suite(
        "quadrature overlap vs analytic Gaussian",
        PIPELINE_TOL,
        |rng, _| {
            let delta: f64 = rng.gen_range(0.002..0.05);
            let l: f64 = rng.gen_range(-300.0..300.0);
            let analytic = (-delta * delta * l * l / 2.0).exp();
            Ok((gaussian_overlap(l, OverlapConvention::Quadrature, delta) - analytic).abs())
        },
    )?;

    r.suite(
        "E_P bounds and distinguishable limit",
        EXACT_TOL,
        |rng, k| {
            let (a, b) = pair_up_down(rng, dim(k));
            let e = entanglement_of_particles(&number_distribution(&a, &b)?)?;
            let mut b0 = b.clone();
            b0.dist = DistVector::basis(2, 1);
            let mut a0 = a.clone();
            a0.dist = DistVector::basis(2, 0);
            let e0 = entanglement_of_particles(&number_distribution(&a0, &b0)?)?;
            Ok((-e).max(e - 1.0).max(0.0).max(e0.abs()))
        },
    )?;

    // Reports: relations that are measured, not asserted.
    let mut ep_gap: f64 = 0.0;
    let mut norm_gap: f64 = 0.0;
    for k in 0..cfg.trials {
        let (a, b) = pair_up_down(&mut r.rng, dim(k));
        let o = a.dist.inner(&b.dist)?;
        let closed = concurrence_closed_form(&a.spatial, &b.spatial, o)?;
        let e = entanglement_of_particles(&number_distribution(&a, &b)?)?;
        let rho = postselected_spin_state(&a, &b)?;
        ep_gap = ep_gap.max((e - closed / 2.0).abs());
        if rho.weight() > 0.0 {
            norm_gap = norm_gap.max((wootters_concurrence(&rho, true)? - closed).abs());
        }
    }
    r.measure("max |E_P - C_closed/2|", ep_gap);
    r.measure(
        "max |C_wootters_normalized - C_closed| (off balance)",
        norm_gap,
    );

    let (l, sigma) = (60.0, crate::optics::DEFAULT_SIGMA_UM);
    let delta = crate::optics::delta_from_sigma(sigma);
    let log_c = (concurrence_optical(22.5, l, sigma)).ln();
    r.measure(
        "ln C_optical / ln overlap_paper (l=60um)",
        log_c / gaussian_overlap(l, OverlapConvention::Paper, delta).ln(),
    );
    r.measure(
        "ln C_optical / ln overlap_quadrature (l=60um)",
        log_c / gaussian_overlap(l, OverlapConvention::Quadrature, delta).ln(),
    );
    let (pa, pb) = photon_pair(22.5, 1.0)?;
    r.measure(
        "E_P at theta=22.5, l=0",
        entanglement_of_particles(&number_distribution(&pa, &pb)?)?,
    );

    Ok(r.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_runs_every_suite() {
        let rep = run_verification(&VerifyConfig {
            trials: 1,
            ..Default::default()
        })
        .unwrap();
        assert!(rep.suites.len() >= 14);
        assert!(rep.suites.iter().all(|s| s.trials == 1));
        assert!(rep.all_passed(), "{rep:#?}");
    }

    #[test]
    fn corrupted_tolerance_fails() {
        let cfg = VerifyConfig {
            trials: 2,
            tolerance_scale: -1.0,
            ..Default::default()
        };
        assert!(!run_verification(&cfg).unwrap().all_passed());
    }

    #[test]
    fn zero_trials_is_an_error() {
        assert!(run_verification(&VerifyConfig {
            trials: 0,
            ..Default::default()
        })
        .is_err());
    }
}
