//! Brute-force first-quantization oracle.
//!
//! Two bosons are stored as an explicit dense tensor over two pseudo-labeled
//! slots, each slot spanning `mode (2) x spin (2) x dist (d)`. Everything here
//! is plain index enumeration; it exists to check the no-labeling calculus and
//! the density-matrix pipeline against an independent route.

use num_complex::Complex64;

use crate::entanglement::SpinDensityMatrix;
use crate::error::{Error, Result};
use crate::state::{Mode, SingleParticleState, Spin, ZERO};

/// Index of `(mode, spin, a)` inside one slot of dimension `4 d`.
pub fn slot_index(mode: Mode, spin: Spin, a: usize, dist_dim: usize) -> usize {
    (mode.index() * 2 + spin.index()) * dist_dim + a
}

fn slot_decompose(i: usize, dist_dim: usize) -> (Mode, Spin, usize) {
    let a = i % dist_dim;
    let ms = i / dist_dim;
    let mode = Mode::ALL[ms / 2];
    let spin = Spin::ALL[ms % 2];
    (mode, spin, a)
}

/// Explicit single-slot vector `|psi> (x) |s> (x) |phi>`, length `4 d`.
pub fn single_slot(p: &SingleParticleState) -> Vec<Complex64> {
    let d = p.dist_dim();
    let mut v = vec![ZERO; 4 * d];
    for mode in Mode::ALL {
        for (a, amp) in p.dist.amplitudes().iter().enumerate() {
            v[slot_index(mode, p.spin, a, d)] = p.spatial.at(mode) * amp;
        }
    }
    v
}

/// Sesquilinear inner product of two single-slot vectors.
pub fn single_slot_inner(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y).map(|(a, b)| a.conj() * b).sum())
}

/// Dense two-slot tensor over `(mode x spin x dist)^{(x)2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState {
    dist_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl LabeledState {
    pub fn zeros(dist_dim: usize) -> Self {
        let n = 4 * dist_dim;
        Self {
            dist_dim,
            amplitudes: vec![ZERO; n * n],
        }
    }

    /// Unsymmetrized product `|p1>_1 |p2>_2`.
    pub fn product(p1: &SingleParticleState, p2: &SingleParticleState) -> Result<Self> {
        check_dims(p1.dist_dim(), p2.dist_dim())?;
        let (u, v) = (single_slot(p1), single_slot(p2));
        let mut out = Self::zeros(p1.dist_dim());
        let n = out.slot_dim();
        for (i, x) in u.iter().enumerate() {
            for (j, y) in v.iter().enumerate() {
                out.amplitudes[i * n + j] = x * y;
            }
        }
        Ok(out)
    }

    pub fn dist_dim(&self) -> usize {
        self.dist_dim
    }

    pub fn slot_dim(&self) -> usize {
        4 * self.dist_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i * self.slot_dim() + j]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Exchanges the two slot labels.
    pub fn swapped(&self) -> Self {
        let n = self.slot_dim();
        let mut out = Self::zeros(self.dist_dim);
        for i in 0..n {
            for j in 0..n {
                out.amplitudes[j * n + i] = self.amplitudes[i * n + j];
            }
        }
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: Complex64, other: &Self) -> Result<()> {
        check_dims(self.dist_dim, other.dist_dim)?;
        for (x, y) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *x += c * y;
        }
        Ok(())
    }

    /// Largest entrywise deviation from another tensor of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dist_dim, other.dist_dim)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// `(|p1>_1 |p2>_2 + |p2>_1 |p1>_2) / sqrt(2)`.
pub fn symmetrize(p1: &SingleParticleState, p2: &SingleParticleState) -> Result<LabeledState> {
    let mut out = LabeledState::product(p1, p2)?;
    let other = LabeledState::product(p2, p1)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (x, y) in out.amplitudes.iter_mut().zip(&other.amplitudes) {
        *x = (*x + y) * h;
    }
    Ok(out)
}

/// Inner product on the full labeled space.
pub fn labeled_inner(x: &LabeledState, y: &LabeledState) -> Result<Complex64> {
    check_dims(x.dist_dim, y.dist_dim)?;
    Ok(x.amplitudes
        .iter()
        .zip(&y.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Contracts a single bra against the symmetrized two-slot state and returns
/// the leftover single-slot vector, averaged over which slot the bra hits.
pub fn oracle_project_single(
    bra: &SingleParticleState,
    state: &LabeledState,
) -> Result<Vec<Complex64>> {
    check_dims(bra.dist_dim(), state.dist_dim)?;
    let c = single_slot(bra);
    let n = state.slot_dim();
    let mut out = vec![ZERO; n];
    for i in 0..n {
        for j in 0..n {
            let amp = state.get(i, j);
            // bra on slot 1 leaves slot 2, bra on slot 2 leaves slot 1
            out[j] += c[i].conj() * amp * 0.5;
            out[i] += c[j].conj() * amp * 0.5;
        }
    }
    Ok(out)
}

/// Squared-norm mass of the tensor split by detector occupation:
/// `[(2,0), (1,1), (0,2)]` as `(n_L, n_R)`.
pub fn occupation_weights(state: &LabeledState) -> [f64; 3] {
    let n = state.slot_dim();
    let d = state.dist_dim;
    let mut w = [0.0; 3];
    for i in 0..n {
        for j in 0..n {
            let (m1, _, _) = slot_decompose(i, d);
            let (m2, _, _) = slot_decompose(j, d);
            w[m1.index() + m2.index()] += state.get(i, j).norm_sqr();
        }
    }
    w
}

/// Projects onto one particle at L and one at R, reads the L particle's
/// spin as qubit 1 and the R particle's spin as qubit 2, and traces out
/// both distinguishability factors. The result is unnormalized; its trace
/// is the post-selection weight.
pub fn oracle_postselected_density(state: &LabeledState) -> SpinDensityMatrix {
    let d = state.dist_dim;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // amp[(s_L, a, s_R, b)] = <(L, s_L, X_a), (R, s_R, X_b) | state>
    let mut amp = vec![ZERO; 4 * d * d];
    let at = |s_l: Spin, a: usize, s_r: Spin, b: usize| {
        ((s_l.index() * 2 + s_r.index()) * d + a) * d + b
    };
    for s_l in Spin::ALL {
        for s_r in Spin::ALL {
            for a in 0..d {
                for b in 0..d {
                    let i = slot_index(Mode::L, s_l, a, d);
                    let j = slot_index(Mode::R, s_r, b, d);
                    amp[at(s_l, a, s_r, b)] = (state.get(i, j) + state.get(j, i)) * h;
                }
            }
        }
    }
    let mut m = nalgebra::Matrix4::<Complex64>::zeros();
    for row in 0..4 {
        for col in 0..4 {
            let (rl, rr) = (Spin::ALL[row / 2], Spin::ALL[row % 2]);
            let (cl, cr) = (Spin::ALL[col / 2], Spin::ALL[col % 2]);
            let mut acc = ZERO;
            for a in 0..d {
                for b in 0..d {
                    acc += amp[at(rl, a, rr, b)] * amp[at(cl, a, cr, b)].conj();
                }
            }
            m[(row, col)] = acc;
        }
    }
    SpinDensityMatrix::from_matrix(m)
}

/// Probability that both particles are found in `mode` and land in different
/// outcomes of the spin analyzer `analyzer` (rows are outcome bras in the
/// up/down basis). Normalized by the state's squared norm.
pub fn oracle_coincidence(state: &LabeledState, mode: Mode, analyzer: [[Complex64; 2]; 2]) -> f64 {
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return 0.0;
    }
    let d = state.dist_dim;
    let mut total = 0.0;
    for k1 in 0..2 {
        for k2 in 0..2 {
            if k1 == k2 {
                continue;
            }
            for a in 0..d {
                for b in 0..d {
                    let mut acc = ZERO;
                    for s1 in Spin::ALL {
                        for s2 in Spin::ALL {
                            let i = slot_index(mode, s1, a, d);
                            let j = slot_index(mode, s2, b, d);
                            acc += analyzer[k1][s1.index()]
                                * analyzer[k2][s2.index()]
                                * state.get(i, j);
                        }
                    }
                    total += acc.norm_sqr();
                }
            }
        }
    }
    total / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{DistVector, SpatialAmplitudes, ONE};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn particle(
        l: Complex64,
        r: Complex64,
        spin: Spin,
        dist: Vec<Complex64>,
    ) -> SingleParticleState {
        SingleParticleState::new(
            SpatialAmplitudes::normalized(l, r).unwrap(),
            spin,
            DistVector::normalized(dist).unwrap(),
        )
    }

    #[test]
    fn identical_inputs_bunch() {
        let s = particle(
            c(0.6, 0.1),
            c(0.2, -0.5),
            Spin::Up,
            vec![c(1.0, 0.0), c(0.0, 1.0)],
        );
        let sym = symmetrize(&s, &s).unwrap();
        let prod = LabeledState::product(&s, &s).unwrap();
        let mut expected = LabeledState::zeros(2);
        expected
            .add_scaled(c(std::f64::consts::SQRT_2, 0.0), &prod)
            .unwrap();
        assert!(sym.max_abs_diff(&expected).unwrap() < 1e-15);
        assert!((sym.norm_sqr() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_inputs_give_unit_norm() {
        let a = particle(c(1.0, 0.0), c(1.0, 0.0), Spin::Up, vec![ONE]);
        let b = particle(c(1.0, 0.0), c(1.0, 0.0), Spin::Down, vec![ONE]);
        assert!((symmetrize(&a, &b).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetrized_state_is_swap_invariant() {
        let a = particle(
            c(0.3, 0.2),
            c(-0.4, 0.9),
            Spin::Up,
            vec![c(0.2, 0.1), c(0.7, 0.0), c(0.0, -0.3)],
        );
        let b = particle(
            c(0.1, 0.0),
            c(0.5, 0.5),
            Spin::Down,
            vec![c(0.0, 1.0), c(0.4, 0.0), c(0.1, 0.1)],
        );
        let s = symmetrize(&a, &b).unwrap();
        assert_eq!(s, symmetrize(&b, &a).unwrap());
        assert!(s.max_abs_diff(&s.swapped()).unwrap() < 1e-15);
    }

    #[test]
    fn mutually_orthogonal_pairs_have_zero_overlap() {
        let d = |a| DistVector::basis(4, a);
        let mk = |a| SingleParticleState::at_detector(Mode::L, Spin::Up, d(a));
        let ab = symmetrize(&mk(0), &mk(1)).unwrap();
        let cd = symmetrize(&mk(2), &mk(3)).unwrap();
        assert_eq!(labeled_inner(&cd, &ab).unwrap(), ZERO);
        assert!((labeled_inner(&ab, &ab).unwrap() - ONE).norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = SingleParticleState::at_detector(Mode::L, Spin::Up, DistVector::basis(1, 0));
        let b = SingleParticleState::at_detector(Mode::L, Spin::Up, DistVector::basis(2, 0));
        assert!(matches!(
            symmetrize(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        let x = LabeledState::zeros(1);
        let y = LabeledState::zeros(2);
        assert!(labeled_inner(&x, &y).is_err());
    }

    #[test]
    fn both_at_left_has_no_postselected_support() {
        let a = SingleParticleState::at_detector(Mode::L, Spin::Up, DistVector::basis(2, 0));
        let b = SingleParticleState::at_detector(Mode::L, Spin::Down, DistVector::basis(2, 1));
        let rho = oracle_postselected_density(&symmetrize(&a, &b).unwrap());
        assert_eq!(rho.weight(), 0.0);
        assert!(rho.matrix().iter().all(|x| *x == ZERO));
    }

    #[test]
    fn balanced_indistinguishable_input_is_symmetric_bell_projector() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (pa, pb) = DistVector::pair_with_overlap(ONE).unwrap();
        let a = particle(c(h, 0.0), c(h, 0.0), Spin::Up, pa.amplitudes().to_vec());
        let b = particle(c(h, 0.0), c(h, 0.0), Spin::Down, pb.amplitudes().to_vec());
        let rho = oracle_postselected_density(&symmetrize(&a, &b).unwrap());
        // 1/4 on the |ud>,|du> block, everything else zero
        for i in 0..4 {
            for j in 0..4 {
                let want = if (1..=2).contains(&i) && (1..=2).contains(&j) {
                    0.25
                } else {
                    0.0
                };
                assert!(
                    (rho.matrix()[(i, j)] - c(want, 0.0)).norm() < 1e-12,
                    "({i},{j})"
                );
            }
        }
        assert!((rho.weight() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_distinguishability_kills_coherence() {
        let a = particle(c(0.6, 0.0), c(0.0, 0.8), Spin::Up, vec![ONE, ZERO]);
        let b = particle(c(0.3, 0.3), c(0.5, -0.1), Spin::Down, vec![ZERO, ONE]);
        let rho = oracle_postselected_density(&symmetrize(&a, &b).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(rho.matrix()[(i, j)].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn occupation_weights_sum_to_norm() {
        let a = particle(c(0.6, 0.2), c(0.1, 0.8), Spin::Up, vec![ONE, c(0.3, 0.0)]);
        let b = particle(
            c(0.3, 0.3),
            c(0.5, -0.1),
            Spin::Down,
            vec![c(0.0, 0.4), ONE],
        );
        let s = symmetrize(&a, &b).unwrap();
        let w = occupation_weights(&s);
        assert!((w.iter().sum::<f64>() - s.norm_sqr()).abs() < 1e-12);
    }
}
