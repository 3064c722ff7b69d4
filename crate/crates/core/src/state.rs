//! Single-particle value types: spin, detector modes, spatial amplitudes and
//! distinguishability vectors.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for exact-arithmetic identities.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for pipeline-level comparisons.
pub const PIPELINE_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Two-level pseudospin measured at the detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    /// Basis index: up = 0, down = 1.
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn inner(self, other: Spin) -> Complex64 {
        if self == other {
            ONE
        } else {
            ZERO
        }
    }
}

/// Detector (output) mode. `L` and `R` are orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    L,
    R,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::L, Mode::R];

    pub fn index(self) -> usize {
        match self {
            Mode::L => 0,
            Mode::R => 1,
        }
    }
}

/// Amplitudes of one particle on the two detector modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialAmplitudes {
    pub left: Complex64,
    pub right: Complex64,
}

impl SpatialAmplitudes {
    /// Validated constructor.
    pub fn new(left: Complex64, right: Complex64) -> Result<Self> {
        let s = Self { left, right };
        s.validate()?;
        Ok(s)
    }

    /// Real-valued convenience constructor; validates like [`SpatialAmplitudes::new`].
    pub fn real(left: f64, right: f64) -> Result<Self> {
        Self::new(Complex64::new(left, 0.0), Complex64::new(right, 0.0))
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(left: Complex64, right: Complex64) -> Result<Self> {
        let n = (left.norm_sqr() + right.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized {
                what: "spatial amplitudes",
                norm_sq: n * n,
                tol: EXACT_TOL,
            });
        }
        Ok(Self {
            left: left / n,
            right: right / n,
        })
    }

    /// Fully localized at one detector.
    pub fn localized(mode: Mode) -> Self {
        match mode {
            Mode::L => Self {
                left: ONE,
                right: ZERO,
            },
            Mode::R => Self {
                left: ZERO,
                right: ONE,
            },
        }
    }

    pub fn at(&self, mode: Mode) -> Complex64 {
        match mode {
            Mode::L => self.left,
            Mode::R => self.right,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.left.norm_sqr() + self.right.norm_sqr()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.left.conj() * other.left + self.right.conj() * other.right
    }

    /// The detector this particle is confined to, if it has exactly zero
    /// amplitude on the other one.
    pub fn localized_mode(&self) -> Option<Mode> {
        match (self.left == ZERO, self.right == ZERO) {
            (false, true) => Some(Mode::L),
            (true, false) => Some(Mode::R),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("spatial amplitudes", self.norm_sqr())
    }
}

/// Unit vector over an orthonormal distinguishability basis `{|X_a>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistVector(Vec<Complex64>);

impl DistVector {
    /// Validated constructor.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = Self(amplitudes);
        v.validate()?;
        Ok(v)
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyDistVector);
        }
        let n = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized {
                what: "distinguishability vector",
                norm_sq: n * n,
                tol: EXACT_TOL,
            });
        }
        Ok(Self(amplitudes.into_iter().map(|a| a / n).collect()))
    }

    /// Stores the amplitudes as given; call [`DistVector::validate`] before use.
    pub fn unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self(amplitudes)
    }

    /// The `a`-th basis vector `|X_a>` of a `dim`-dimensional basis.
    pub fn basis(dim: usize, a: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[a] = ONE;
        Self(v)
    }

    /// A pair `(phi_a, phi_b)` of 2-dimensional vectors with `<phi_a|phi_b> = overlap`.
    pub fn pair_with_overlap(overlap: Complex64) -> Result<(Self, Self)> {
        let m = overlap.norm();
        if m > 1.0 + EXACT_TOL {
            return Err(Error::OverlapOutOfRange(m));
        }
        let rest = (1.0 - m.min(1.0) * m.min(1.0)).max(0.0).sqrt();
        Ok((
            Self(vec![ONE, ZERO]),
            Self(vec![overlap, Complex64::new(rest, 0.0)]),
        ))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.0.iter().zip(&other.0).map(|(x, y)| x.conj() * y).sum())
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::EmptyDistVector);
        }
        check_unit("distinguishability vector", self.norm_sqr())
    }
}

/// One boson: spatial amplitudes, spin, and distinguishability.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleState {
    pub spatial: SpatialAmplitudes,
    pub spin: Spin,
    pub dist: DistVector,
}

impl SingleParticleState {
    pub fn new(spatial: SpatialAmplitudes, spin: Spin, dist: DistVector) -> Self {
        Self {
            spatial,
            spin,
            dist,
        }
    }

    /// A particle sitting entirely at one detector.
    pub fn at_detector(mode: Mode, spin: Spin, dist: DistVector) -> Self {
        Self::new(SpatialAmplitudes::localized(mode), spin, dist)
    }

    pub fn dist_dim(&self) -> usize {
        self.dist.dim()
    }

    pub fn validate(&self) -> Result<()> {
        validate(self)
    }

    /// Deterministic total order used to canonicalize unordered pairs:
    /// spatial pattern (so `L < R` for localized particles), then spin, then
    /// the distinguishability amplitudes lexicographically.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let key = |s: &SpatialAmplitudes| [s.right.re, s.right.im, s.left.re, s.left.im];
        let spatial = key(&self.spatial)
            .iter()
            .zip(key(&other.spatial).iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal);
        spatial.then(self.spin.cmp(&other.spin)).then_with(|| {
            let (x, y) = (self.dist.amplitudes(), other.dist.amplitudes());
            x.len().cmp(&y.len()).then_with(|| {
                x.iter()
                    .zip(y)
                    .flat_map(|(a, b)| [a.re.total_cmp(&b.re), a.im.total_cmp(&b.im)])
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
        })
    }
}

impl fmt::Display for SingleParticleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spin = match self.spin {
            Spin::Up => "up",
            Spin::Down => "down",
        };
        match self.spatial.localized_mode() {
            Some(m) => write!(f, "({m:?}, {spin}, phi[{}])", self.dist.dim()),
            None => write!(
                f,
                "({}|L> + {}|R>, {spin}, phi[{}])",
                self.spatial.left,
                self.spatial.right,
                self.dist.dim()
            ),
        }
    }
}

/// `<x|y>` = spatial overlap x spin overlap x distinguishability overlap.
pub fn inner_single(x: &SingleParticleState, y: &SingleParticleState) -> Result<Complex64> {
    let dist = x.dist.inner(&y.dist)?;
    Ok(x.spatial.inner(&y.spatial) * x.spin.inner(y.spin) * dist)
}

/// Checks every norm invariant of a single-particle state.
pub fn validate(s: &SingleParticleState) -> Result<()> {
    s.spatial.validate()?;
    s.dist.validate()
}

fn check_unit(what: &'static str, norm_sq: f64) -> Result<()> {
    if (norm_sq - 1.0).abs() <= EXACT_TOL {
        Ok(())
    } else {
        Err(Error::NotNormalized {
            what,
            norm_sq,
            tol: EXACT_TOL,
        })
    }
}
