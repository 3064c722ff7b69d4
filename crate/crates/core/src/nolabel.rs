//! No-labeling calculus for two identical bosons.
//!
//! A two-boson ket is an unordered pair of single-particle states; there are
//! no slot labels. Overlaps between kets follow the permanent-style
//! transition rule, and a single-particle bra applied to a two-boson ket
//! leaves a weighted single-particle residual.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::{self, LabeledState};
use crate::state::{inner_single, Mode, SingleParticleState, Spin, ZERO};

/// Unordered pair `{a, b}`, stored in canonical order so `{a, b} == {b, a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnorderedPair {
    first: SingleParticleState,
    second: SingleParticleState,
}

impl UnorderedPair {
    pub fn new(a: SingleParticleState, b: SingleParticleState) -> Self {
        if a.canonical_cmp(&b) == Ordering::Greater {
            Self {
                first: b,
                second: a,
            }
        } else {
            Self {
                first: a,
                second: b,
            }
        }
    }

    pub fn first(&self) -> &SingleParticleState {
        &self.first
    }

    pub fn second(&self) -> &SingleParticleState {
        &self.second
    }

    pub fn as_tuple(&self) -> (&SingleParticleState, &SingleParticleState) {
        (&self.first, &self.second)
    }

    /// Detector modes of both particles, if both are localized.
    pub fn modes(&self) -> Option<(Mode, Mode)> {
        Some((
            self.first.spatial.localized_mode()?,
            self.second.spatial.localized_mode()?,
        ))
    }

    /// True when exactly one particle sits at L and the other at R.
    pub fn is_one_per_detector(&self) -> bool {
        matches!(self.modes(), Some((a, b)) if a != b)
    }
}

/// One `coefficient * |a, b>` term.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coefficient: Complex64,
    pub pair: UnorderedPair,
}

/// Complex-weighted sum of unordered two-boson kets with merged duplicates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SymmetricTwoBosonState {
    terms: Vec<Term>,
}

impl SymmetricTwoBosonState {
    pub fn new() -> Self {
        Self::default()
    }

    /// The single ket `|a, b>`.
    pub fn from_pair(a: SingleParticleState, b: SingleParticleState) -> Self {
        let mut s = Self::new();
        s.push(Complex64::new(1.0, 0.0), a, b);
        s
    }

    /// Adds `coefficient * |a, b>`, merging with an existing equal pair.
    /// Exactly-zero coefficients are skipped.
    pub fn push(&mut self, coefficient: Complex64, a: SingleParticleState, b: SingleParticleState) {
        if coefficient == ZERO {
            return;
        }
        let pair = UnorderedPair::new(a, b);
        match self.terms.iter_mut().find(|t| t.pair == pair) {
            Some(t) => t.coefficient += coefficient,
            None => self.terms.push(Term { coefficient, pair }),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dist_dim(&self) -> Option<usize> {
        self.terms.first().map(|t| t.pair.first.dist_dim())
    }

    /// Coefficient attached to `{a, b}`, zero if absent.
    pub fn coefficient_of(&self, a: &SingleParticleState, b: &SingleParticleState) -> Complex64 {
        let pair = UnorderedPair::new(a.clone(), b.clone());
        self.terms
            .iter()
            .find(|t| t.pair == pair)
            .map_or(ZERO, |t| t.coefficient)
    }

    /// `<self|other>` extended sesquilinearly from [`transition_two`].
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        let mut acc = ZERO;
        for x in &self.terms {
            for y in &other.terms {
                acc += x.coefficient.conj()
                    * y.coefficient
                    * transition_two(x.pair.as_tuple(), y.pair.as_tuple())?;
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> Result<f64> {
        Ok(self.inner(self)?.re)
    }

    /// Re-expands into the pseudo-labeled tensor representation.
    pub fn to_labeled(&self) -> Result<LabeledState> {
        let d = self.dist_dim().unwrap_or(1);
        let mut out = LabeledState::zeros(d);
        for t in &self.terms {
            let (a, b) = t.pair.as_tuple();
            out.add_scaled(t.coefficient, &oracle::symmetrize(a, b)?)?;
        }
        Ok(out)
    }
}

/// `<C, D | A, B> = <C|A><D|B> + <C|B><D|A>`.
pub fn transition_two(
    bra: (&SingleParticleState, &SingleParticleState),
    ket: (&SingleParticleState, &SingleParticleState),
) -> Result<Complex64> {
    let (c, d) = bra;
    let (a, b) = ket;
    Ok(inner_single(c, a)? * inner_single(d, b)? + inner_single(c, b)? * inner_single(d, a)?)
}

/// Formal single-particle sum left over after a one-particle projection.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleResidual {
    pub terms: Vec<(Complex64, SingleParticleState)>,
}

impl SingleResidual {
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == ZERO)
    }

    /// `<test | residual>`.
    pub fn contract(&self, test: &SingleParticleState) -> Result<Complex64> {
        self.terms
            .iter()
            .try_fold(ZERO, |acc, (c, s)| Ok(acc + c * inner_single(test, s)?))
    }

    /// Explicit single-slot vector of the residual.
    pub fn to_slot_vector(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for (c, s) in &self.terms {
            let v = oracle::single_slot(s);
            if out.is_empty() {
                out = vec![ZERO; v.len()];
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }
}

/// `<C | A, B> = (<C|A> |B> + <C|B> |A>) / sqrt(2)`.
pub fn project_single(
    bra: &SingleParticleState,
    ket: (&SingleParticleState, &SingleParticleState),
) -> Result<SingleResidual> {
    let (a, b) = ket;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(SingleResidual {
        terms: vec![
            (inner_single(bra, a)? * h, b.clone()),
            (inner_single(bra, b)? * h, a.clone()),
        ],
    })
}

/// Rewrites `|(psi_A, up, phi_A), (psi_B, down, phi_B)>` in the detector
/// basis: four kets weighted by `a_l b_l`, `a_l b_r`, `a_r b_l`, `a_r b_r`.
/// The distinguishability vector travels with its particle's spin.
pub fn expand_in_detector_basis(
    pa: &SingleParticleState,
    pb: &SingleParticleState,
) -> Result<SymmetricTwoBosonState> {
    if pa.spin != Spin::Up || pb.spin != Spin::Down {
        return Err(Error::UnsupportedSpins {
            first: pa.spin,
            second: pb.spin,
        });
    }
    if pa.dist_dim() != pb.dist_dim() {
        return Err(Error::DimensionMismatch {
            left: pa.dist_dim(),
            right: pb.dist_dim(),
        });
    }
    let at = |mode, p: &SingleParticleState| {
        SingleParticleState::at_detector(mode, p.spin, p.dist.clone())
    };
    let (al, ar) = (pa.spatial.left, pa.spatial.right);
    let (bl, br) = (pb.spatial.left, pb.spatial.right);

    let mut s = SymmetricTwoBosonState::new();
    s.push(al * bl, at(Mode::L, pa), at(Mode::L, pb));
    s.push(al * br, at(Mode::L, pa), at(Mode::R, pb));
    s.push(ar * bl, at(Mode::L, pb), at(Mode::R, pa));
    s.push(ar * br, at(Mode::R, pa), at(Mode::R, pb));
    Ok(s)
}

/// Keeps only the terms with one particle at each detector; coefficients are
/// left unnormalized.
pub fn postselect_one_per_detector(s: &SymmetricTwoBosonState) -> SymmetricTwoBosonState {
    SymmetricTwoBosonState {
        terms: s
            .terms
            .iter()
            .filter(|t| t.pair.is_one_per_detector())
            .cloned()
            .collect(),
    }
}
