//! The antisymmetrizer and the generalized excluded-state test.
//!
//! `A(χ) = (1/n!) Σ_σ sgn(σ) σχ` is the orthogonal projector onto the totally
//! antisymmetric subspace. A pre-state χ is *excluded* when its physical state
//! `A(χ)/‖A(χ)‖` has the undetermined form `0/0`, detected here as a vanishing
//! ratio `‖A(χ)‖/‖χ‖`.
//!
//! Particle slots are numbered from 1 throughout this module.

use std::fmt;

use crate::perm;
use crate::state::NFermionTensor;
use crate::{Error, Result};

/// Which condition made a state excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// The antisymmetrized state vanishes without any pair symmetry.
    GenericVanishing,
    /// The pre-state is symmetric in particle slots `(i, j)`, 1-based.
    PairSymmetry(usize, usize),
    /// Two single-particle states coincide up to phase.
    PauliEqualStates,
    SymmetricSpatial,
    AntisymmetricSpatial,
    ParallelSpins,
    None,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::GenericVanishing => f.write_str("generic-vanishing"),
            Condition::PairSymmetry(i, j) => write!(f, "pair-symmetry({i},{j})"),
            Condition::PauliEqualStates => f.write_str("pauli-equal-states"),
            Condition::SymmetricSpatial => f.write_str("symmetric-spatial"),
            Condition::AntisymmetricSpatial => f.write_str("antisymmetric-spatial"),
            Condition::ParallelSpins => f.write_str("parallel-spins"),
            Condition::None => f.write_str("none"),
        }
    }
}

/// Outcome of an exclusion test. `excluded` holds exactly when
/// `norm_ratio <= tol` for the tolerance the test was run with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionVerdict {
    pub excluded: bool,
    pub norm_ratio: f64,
    pub condition: Condition,
}

impl ExclusionVerdict {
    pub(crate) fn from_ratio(norm_ratio: f64, tol: f64, condition: Condition) -> Self {
        let excluded = norm_ratio <= tol;
        Self {
            excluded,
            norm_ratio,
            condition: if excluded { condition } else { Condition::None },
        }
    }
}

fn check_slots(n: usize, i: usize, j: usize) -> Result<(usize, usize)> {
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(Error::Index(format!(
            "slot pair ({i},{j}) invalid for n = {n} (slots are 1..={n}, distinct)"
        )));
    }
    Ok((i.min(j) - 1, i.max(j) - 1))
}

fn require_nonzero(t: &NFermionTensor) -> Result<f64> {
    let n = t.norm();
    if n == 0.0 {
        return Err(Error::ZeroState { norm: n, tol: 0.0 });
    }
    Ok(n)
}

/// Exchanges the indices of slots `i` and `j`.
pub fn swap_pair(t: &NFermionTensor, i: usize, j: usize) -> Result<NFermionTensor> {
    let n = t.particles();
    let (a, b) = check_slots(n, i, j)?;
    let p = perm::transposition(n, a, b);
    Ok(t.with_amplitudes(perm::permute(t.amplitudes(), n, t.dim(), &p)))
}

/// `A(χ)` with the `1/n!` prefactor; the result is not renormalized.
pub fn antisymmetrize(chi: &NFermionTensor) -> Result<NFermionTensor> {
    let n = chi.particles();
    if n < 2 {
        return Err(Error::Shape(format!("antisymmetrization needs n >= 2, got {n}")));
    }
    Ok(chi.with_amplitudes(perm::antisymmetrize_dense(chi.amplitudes(), n, chi.dim())))
}

/// Whether every pair exchange flips the sign of `phi` within `tol·‖phi‖`.
pub fn exchange_antisymmetry_check(phi: &NFermionTensor, tol: f64) -> Result<bool> {
    let norm = require_nonzero(phi)?;
    let n = phi.particles();
    for (a, b) in perm::slot_pairs(n) {
        let swapped = perm::permute(phi.amplitudes(), n, phi.dim(), &perm::transposition(n, a, b));
        if perm::sum_norm(&swapped, phi.amplitudes()) > tol * norm {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `chi` is invariant under exchanging slots `i` and `j`.
pub fn pair_symmetric(chi: &NFermionTensor, i: usize, j: usize, tol: f64) -> Result<bool> {
    let norm = require_nonzero(chi)?;
    let swapped = swap_pair(chi, i, j)?;
    Ok(perm::diff_norm(swapped.amplitudes(), chi.amplitudes()) <= tol * norm)
}

/// All 1-based slot pairs in which `chi` is symmetric, lexicographic.
pub fn symmetric_pairs(chi: &NFermionTensor, tol: f64) -> Result<Vec<(usize, usize)>> {
    require_nonzero(chi)?;
    let mut out = Vec::new();
    for (a, b) in perm::slot_pairs(chi.particles()) {
        if pair_symmetric(chi, a + 1, b + 1, tol)? {
            out.push((a + 1, b + 1));
        }
    }
    Ok(out)
}

/// The generic norm-ratio exclusion test on a pre-state.
pub fn is_excluded(chi: &NFermionTensor, tol: f64) -> Result<ExclusionVerdict> {
    let norm = require_nonzero(chi)?;
    let ratio = antisymmetrize(chi)?.norm() / norm;
    let condition = match symmetric_pairs(chi, tol)?.first() {
        Some(&(i, j)) => Condition::PairSymmetry(i, j),
        None => Condition::GenericVanishing,
    };
    Ok(ExclusionVerdict::from_ratio(ratio, tol, condition))
}
