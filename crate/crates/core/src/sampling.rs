//! Random valid states for oracle-equivalence checks.

use num_complex::Complex64;
use rand::Rng;

use crate::state::{DistVector, SingleParticleState, SpatialAmplitudes, Spin};

fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_spatial<R: Rng + ?Sized>(rng: &mut R) -> SpatialAmplitudes {
    loop {
        if let Ok(s) = SpatialAmplitudes::normalized(random_complex(rng), random_complex(rng)) {
            return s;
        }
    }
}

pub fn random_dist<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DistVector {
    loop {
        if let Ok(d) = DistVector::normalized((0..dim).map(|_| random_complex(rng)).collect()) {
            return d;
        }
    }
}

pub fn random_spin<R: Rng + ?Sized>(rng: &mut R) -> Spin {
    if rng.gen_bool(0.5) {
        Spin::Up
    } else {
        Spin::Down
    }
}

pub fn random_particle<R: Rng + ?Sized>(
    rng: &mut R,
    spin: Spin,
    dim: usize,
) -> SingleParticleState {
    SingleParticleState::new(random_spatial(rng), spin, random_dist(rng, dim))
}

/// Random complex overlap with magnitude at most one.
pub fn random_overlap<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(
        rng.gen_range(0.0..=1.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}
