//! Post-selected spin density matrices and their entanglement.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nolabel::{self, SymmetricTwoBosonState};
use crate::oracle;
use crate::state::{
    DistVector, Mode, SingleParticleState, SpatialAmplitudes, Spin, EXACT_TOL, PIPELINE_TOL, ZERO,
};

/// Unnormalized two-qubit density matrix in the basis
/// `{|L up, R up>, |L up, R down>, |L down, R up>, |L down, R down>}`,
/// together with its trace (the post-selection weight).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinDensityMatrix {
    matrix: Matrix4<Complex64>,
    weight: f64,
}

impl SpinDensityMatrix {
    /// Takes the weight from the trace without further checks.
    pub fn from_matrix(matrix: Matrix4<Complex64>) -> Self {
        let weight = matrix.trace().re;
        Self { matrix, weight }
    }

    /// Validated constructor.
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let rho = Self::from_matrix(matrix);
        rho.validate()?;
        Ok(rho)
    }

    /// `|psi><psi|` for an (unnormalized) two-qubit vector.
    pub fn pure(psi: [Complex64; 4]) -> Self {
        let v = nalgebra::Vector4::from(psi);
        Self::from_matrix(v * v.adjoint())
    }

    /// Basis index of `|L s_left, R s_right>`.
    pub fn index(left: Spin, right: Spin) -> usize {
        2 * left.index() + right.index()
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn normalized(&self) -> Result<Matrix4<Complex64>> {
        if self.weight <= 0.0 {
            return Err(Error::NoPostSelectionSupport);
        }
        Ok(self.matrix.unscale(self.weight))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.matrix - other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian, positive semidefinite and trace equal to weight, all within 1e-12.
    pub fn validate(&self) -> Result<()> {
        let herm = (self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > EXACT_TOL {
            return Err(Error::InvalidParameter {
                name: "density matrix",
                reason: format!("not Hermitian (deviation {herm:e})"),
            });
        }
        let min_eig = hermitian_part(&self.matrix)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EXACT_TOL {
            return Err(Error::InvalidParameter {
                name: "density matrix",
                reason: format!("negative eigenvalue {min_eig:e}"),
            });
        }
        let tr = self.matrix.trace().re;
        if (tr - self.weight).abs() > EXACT_TOL || self.weight < 0.0 {
            return Err(Error::InvalidParameter {
                name: "density matrix",
                reason: format!("trace {tr} does not match weight {}", self.weight),
            });
        }
        Ok(())
    }
}

fn hermitian_part(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

/// Traces the distinguishability degree of freedom out of a post-selected
/// state, computing every amplitude `<(L, s, X_a), (R, s', X_b)|psi>` with
/// the two-particle transition rule.
pub fn trace_out_distinguishability(s: &SymmetricTwoBosonState) -> Result<SpinDensityMatrix> {
    if s.terms().iter().any(|t| !t.pair.is_one_per_detector()) {
        return Err(Error::NotPostSelected);
    }
    let Some(d) = s.dist_dim() else {
        return Ok(SpinDensityMatrix::from_matrix(Matrix4::zeros()));
    };

    // amplitudes[row][a * d + b] with row = basis index of (s_L, s_R)
    let mut amplitudes = vec![vec![ZERO; d * d]; 4];
    for s_left in Spin::ALL {
        for s_right in Spin::ALL {
            let row = SpinDensityMatrix::index(s_left, s_right);
            for a in 0..d {
                let bra_l =
                    SingleParticleState::at_detector(Mode::L, s_left, DistVector::basis(d, a));
                for b in 0..d {
                    let bra_r =
                        SingleParticleState::at_detector(Mode::R, s_right, DistVector::basis(d, b));
                    let mut amp = ZERO;
                    for t in s.terms() {
                        amp += t.coefficient
                            * nolabel::transition_two((&bra_l, &bra_r), t.pair.as_tuple())?;
                    }
                    amplitudes[row][a * d + b] = amp;
                }
            }
        }
    }

    let mut m = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = amplitudes[i]
                .iter()
                .zip(&amplitudes[j])
                .map(|(x, y)| x * y.conj())
                .sum();
        }
    }
    Ok(SpinDensityMatrix::from_matrix(m))
}

/// Closed-form post-selected matrix: populations `|a_l b_r|^2`, `|a_r b_l|^2`
/// and coherence `a_l b_r conj(a_r b_l) |overlap|^2`.
pub fn density_closed_form(
    alphas: &SpatialAmplitudes,
    betas: &SpatialAmplitudes,
    overlap: Complex64,
) -> SpinDensityMatrix {
    let ud = alphas.left * betas.right;
    let du = alphas.right * betas.left;
    let o2 = overlap.norm_sqr();
    let i = SpinDensityMatrix::index(Spin::Up, Spin::Down);
    let j = SpinDensityMatrix::index(Spin::Down, Spin::Up);
    let mut m = Matrix4::zeros();
    m[(i, i)] = Complex64::new(ud.norm_sqr(), 0.0);
    m[(j, j)] = Complex64::new(du.norm_sqr(), 0.0);
    m[(i, j)] = ud * du.conj() * o2;
    m[(j, i)] = ud.conj() * du * o2;
    SpinDensityMatrix::from_matrix(m)
}

/// Full no-labeling pipeline: detector-basis expansion, post-selection and
/// distinguishability trace.
pub fn postselected_spin_state(
    pa: &SingleParticleState,
    pb: &SingleParticleState,
) -> Result<SpinDensityMatrix> {
    let expanded = nolabel::expand_in_detector_basis(pa, pb)?;
    trace_out_distinguishability(&nolabel::postselect_one_per_detector(&expanded))
}

/// `sigma_y (x) sigma_y`.
fn spin_flip() -> Matrix4<Complex64> {
    let mut y = Matrix4::zeros();
    y[(0, 3)] = Complex64::new(-1.0, 0.0);
    y[(1, 2)] = Complex64::new(1.0, 0.0);
    y[(2, 1)] = Complex64::new(1.0, 0.0);
    y[(3, 0)] = Complex64::new(-1.0, 0.0);
    y
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`, where `l_i` are the
/// decreasing square roots of the eigenvalues of `rho * rho~`. With
/// `normalize` the matrix is divided by its weight first; otherwise the raw
/// (possibly unnormalized) matrix is used.
///
/// The `l_i` are taken as the singular values of `sqrt(rho) Y sqrt(rho)*`
/// (with `Y = sigma_y (x) sigma_y`), whose Gram matrix is
/// `sqrt(rho) rho~ sqrt(rho)`. Eigenvalues of `rho` below the solver's
/// resolution are treated as zero.
pub fn wootters_concurrence(rho: &SpinDensityMatrix, normalize: bool) -> Result<f64> {
    let m = if normalize {
        rho.normalized()?
    } else {
        *rho.matrix()
    };
    let m = hermitian_part(&m);

    let eig = m.symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let floor = 4.0 * f64::EPSILON * top;
    let roots = eig
        .eigenvalues
        .map(|x| Complex64::new(if x > floor { x.sqrt() } else { 0.0 }, 0.0));
    let sqrt_m = eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.adjoint();

    let product = sqrt_m * spin_flip() * sqrt_m.conjugate();
    let mut lambdas: Vec<f64> = product.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Spatial-overlap factor `4 |a_l a_r b_l b_r|`.
pub fn spatial_overlap_factor(alphas: &SpatialAmplitudes, betas: &SpatialAmplitudes) -> f64 {
    4.0 * (alphas.left * alphas.right * betas.left * betas.right).norm()
}

/// `C = 4 |a_l a_r b_l b_r| * |overlap|^2`.
pub fn concurrence_closed_form(
    alphas: &SpatialAmplitudes,
    betas: &SpatialAmplitudes,
    overlap: Complex64,
) -> Result<f64> {
    let m = overlap.norm();
    if m > 1.0 + EXACT_TOL {
        return Err(Error::OverlapOutOfRange(m));
    }
    Ok(spatial_overlap_factor(alphas, betas) * overlap.norm_sqr())
}

/// State of one number-distribution branch.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchState {
    /// One particle per detector: spin state of the two registers.
    Split(SpinDensityMatrix),
    /// Both particles at one detector; no L/R bipartition.
    Bunched,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub n_left: usize,
    pub n_right: usize,
    pub probability: f64,
    pub state: BranchState,
}

/// Distribution over detector occupations `(n_L, n_R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberDistribution {
    pub branches: Vec<Branch>,
}

impl NumberDistribution {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        let d = Self { branches };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.branches.iter().map(|b| b.probability).sum();
        let negative = self.branches.iter().any(|b| b.probability < -PIPELINE_TOL);
        if negative || (sum - 1.0).abs() > PIPELINE_TOL {
            return Err(Error::InvalidProbabilities { sum });
        }
        Ok(())
    }

    pub fn probability(&self, n_left: usize, n_right: usize) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.n_left == n_left && b.n_right == n_right)
            .map(|b| b.probability)
            .sum()
    }
}

/// Branch probabilities and the split-branch spin state, read off the
/// normalized symmetrized tensor of the two particles.
pub fn number_distribution(
    pa: &SingleParticleState,
    pb: &SingleParticleState,
) -> Result<NumberDistribution> {
    let state = oracle::symmetrize(pa, pb)?;
    let norm = state.norm_sqr();
    let w = oracle::occupation_weights(&state);
    let split = oracle::oracle_postselected_density(&state);
    NumberDistribution::new(vec![
        Branch {
            n_left: 2,
            n_right: 0,
            probability: w[0] / norm,
            state: BranchState::Bunched,
        },
        Branch {
            n_left: 1,
            n_right: 1,
            probability: w[1] / norm,
            state: BranchState::Split(split),
        },
        Branch {
            n_left: 0,
            n_right: 2,
            probability: w[2] / norm,
            state: BranchState::Bunched,
        },
    ])
}

/// `E_P = sum_N p_N E(psi_N)`, with the split branch scored by its normalized
/// Wootters concurrence and bunched branches scored zero.
pub fn entanglement_of_particles(dist: &NumberDistribution) -> Result<f64> {
    dist.validate()?;
    let mut total = 0.0;
    for b in &dist.branches {
        if let BranchState::Split(rho) = &b.state {
            if b.probability > 0.0 {
                total += b.probability * wootters_concurrence(rho, true)?;
            }
        }
    }
    Ok(total)
}
