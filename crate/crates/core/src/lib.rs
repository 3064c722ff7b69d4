//! Entanglement of two identical bosons as a function of their spatial
//! overlap and indistinguishability.
//!
//! The crate has two independent routes to every state-level result:
//!
//! * [`nolabel`]: unordered two-boson kets and the permanent-style
//!   transition rule, with detector-basis expansion and post-selection.
//! * [`oracle`]: explicit symmetrized tensors over two pseudo-labeled slots.
//!
//! [`entanglement`] turns post-selected states into spin density matrices and
//! concurrences, and [`optics`] models the photonic experiment (waveplate
//! angle, optical delay, HOM dips, Poisson counts, Gaussian fits).

// `!(x > 0.0)` is deliberate: NaN must fail these checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod nolabel;
pub mod optics;
pub mod oracle;
pub mod sampling;
pub mod state;
pub mod verify;

pub use entanglement::{
    concurrence_closed_form, entanglement_of_particles, number_distribution,
    postselected_spin_state, trace_out_distinguishability, wootters_concurrence,
    NumberDistribution, SpinDensityMatrix,
};
pub use error::{Error, Result};
pub use nolabel::{
    expand_in_detector_basis, postselect_one_per_detector, project_single, transition_two,
    SymmetricTwoBosonState,
};
pub use oracle::{labeled_inner, oracle_postselected_density, symmetrize, LabeledState};
pub use state::{
    inner_single, validate, DistVector, Mode, SingleParticleState, SpatialAmplitudes, Spin,
    EXACT_TOL, PIPELINE_TOL,
};

pub use num_complex::Complex64;
