//! Channels acting on diagonal states.
//!
//! All maps here are stochastic on the population vector: they preserve the
//! sum and non-negativity, and they never create coherences.

use crate::error::{HbacError, Result};
use crate::state::{thermal_qubit, BathSpec, DiagonalState};

/// One channel application in a cooling protocol.
#[derive(Clone, Debug, PartialEq)]
pub enum ProtocolStep {
    /// Reorder populations non-increasingly (entropy compression onto qubit 0).
    Sort,
    /// Rethermalize each listed qubit with the bath.
    Reset { qubits: Vec<usize>, bath: BathSpec },
    /// Equilibrate two basis populations to `p[i] / p[j] = ratio`.
    StateReset { pair: (usize, usize), ratio: f64 },
    /// Hold one qubit at zero polarization.
    Saturate(usize),
    /// Move population `k` to `perm[k]`.
    Permute(Vec<usize>),
}

impl ProtocolStep {
    pub fn apply(&self, state: &DiagonalState) -> Result<DiagonalState> {
        match self {
            ProtocolStep::Sort => Ok(sort_step(state)),
            ProtocolStep::Reset { qubits, bath } => refresh_all(state, qubits, *bath),
            ProtocolStep::StateReset { pair, ratio } => state_reset(state, pair.0, pair.1, *ratio),
            ProtocolStep::Saturate(q) => saturate(state, *q),
            ProtocolStep::Permute(perm) => apply_permutation(state, perm),
        }
    }
}

/// Applies a sequence of steps left to right.
pub fn apply_steps(state: &DiagonalState, steps: &[ProtocolStep]) -> Result<DiagonalState> {
    steps
        .iter()
        .try_fold(state.clone(), |s, step| step.apply(&s))
}

pub fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    if perm.len() != len {
        return Err(HbacError::NotBijective { len });
    }
    let mut seen = vec![false; len];
    for &target in perm {
        if target >= len || std::mem::replace(&mut seen[target], true) {
            return Err(HbacError::NotBijective { len });
        }
    }
    Ok(())
}

/// `p'[perm[k]] = p[k]`.
pub fn apply_permutation(state: &DiagonalState, perm: &[usize]) -> Result<DiagonalState> {
    check_permutation(perm, state.len())?;
    let mut out = vec![0.0; state.len()];
    for (&target, &p) in perm.iter().zip(state.populations()) {
        out[target] = p;
    }
    DiagonalState::new(state.num_qubits(), out)
}

/// SORT: populations in non-increasing order.
///
/// With qubit 0 as the most significant bit this puts the largest half of
/// the populations on `|0...>`, which maximizes the target polarization over
/// all permutations. The sort is stable.
pub fn sort_step(state: &DiagonalState) -> DiagonalState {
    let mut p = state.populations().to_vec();
    p.sort_by(|a, b| b.total_cmp(a));
    DiagonalState::new(state.num_qubits(), p).expect("permutation of a valid state")
}

/// Trace out `qubit` and put a fresh thermal qubit in its place.
pub fn refresh_reset(state: &DiagonalState, qubit: usize, bath: BathSpec) -> Result<DiagonalState> {
    let mask = state.qubit_mask(qubit)?;
    let thermal = thermal_qubit(bath);
    if state.num_qubits() == 1 {
        return Ok(thermal);
    }
    let marginal = state.trace_out(qubit)?;
    let shift = mask.trailing_zeros();
    let low = mask - 1;
    let th = thermal.populations();
    let m = marginal.populations();
    let out = (0..state.len())
        .map(|k| {
            let rest = ((k >> (shift + 1)) << shift) | (k & low);
            m[rest] * th[usize::from(k & mask != 0)]
        })
        .collect();
    DiagonalState::new(state.num_qubits(), out)
}

/// Refreshes every listed qubit. The resets act on disjoint qubits, so the
/// order of application does not matter.
pub fn refresh_all(
    state: &DiagonalState,
    qubits: &[usize],
    bath: BathSpec,
) -> Result<DiagonalState> {
    qubits
        .iter()
        .try_fold(state.clone(), |s, &q| refresh_reset(&s, q, bath))
}

/// Two-level equilibration between basis states `i` and `j`; every other
/// population is left bit-identical.
pub fn state_reset(state: &DiagonalState, i: usize, j: usize, ratio: f64) -> Result<DiagonalState> {
    state.check_index(i)?;
    state.check_index(j)?;
    if i == j {
        return Err(HbacError::SamePair(i));
    }
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(HbacError::InvalidRatio(ratio));
    }
    let mut p = state.populations().to_vec();
    let total = p[i] + p[j];
    p[i] = total * ratio / (1.0 + ratio);
    p[j] = total / (1.0 + ratio);
    DiagonalState::new(state.num_qubits(), p)
}

/// Ideal saturation of `qubit`: each pair of populations differing only in
/// that bit is replaced by its mean.
pub fn saturate(state: &DiagonalState, qubit: usize) -> Result<DiagonalState> {
    let mask = state.qubit_mask(qubit)?;
    let mut p = state.populations().to_vec();
    for k in (0..p.len()).filter(|k| k & mask == 0) {
        let mean = 0.5 * (p[k] + p[k | mask]);
        p[k] = mean;
        p[k | mask] = mean;
    }
    DiagonalState::new(state.num_qubits(), p)
}
