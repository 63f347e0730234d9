//! Cross-relaxation cooling: equilibrate `|0..0>` with the state where the
//! target and driven qubits are both `|1>`, then saturate the driven qubit.
//!
//! For two qubits the pair is (|00>, |11>). Their energy gap is twice the
//! single-qubit gap, so the default equilibrium ratio is `e^{4 delta}`; the
//! steady target polarization is then `tanh(2 delta) = 2 eps / (1 + eps^2)`.

use serde::Serialize;

use crate::channels::{saturate, state_reset};
use crate::error::{HbacError, Result};
use crate::run::{
    check_tolerance, iterate_to_fixed_point, Protocol, RunReport, DEFAULT_MAX_ITERS,
    DEFAULT_TOLERANCE,
};
use crate::state::{register_len, BathSpec, DiagonalState};

#[derive(Clone, Debug, PartialEq)]
pub struct NoeConfig {
    pub bath: BathSpec,
    pub driven_qubit: usize,
    /// Basis indices equilibrated by the state reset. `None` picks
    /// [`default_active_pair`].
    pub active_pair: Option<(usize, usize)>,
    /// Replaces the default `e^{4 delta}` ratio.
    pub ratio_override: Option<f64>,
    pub tol: f64,
    pub max_iters: usize,
}

impl NoeConfig {
    pub fn new(bath: BathSpec) -> Self {
        Self {
            bath,
            driven_qubit: 1,
            active_pair: None,
            ratio_override: None,
            tol: DEFAULT_TOLERANCE,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }

    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio_override = Some(ratio);
        self
    }

    pub fn with_driven_qubit(mut self, qubit: usize) -> Self {
        self.driven_qubit = qubit;
        self
    }

    pub fn with_active_pair(mut self, i: usize, j: usize) -> Self {
        self.active_pair = Some((i, j));
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn ratio(&self) -> f64 {
        self.ratio_override
            .unwrap_or_else(|| (4.0 * self.bath.delta()).exp())
    }

    pub fn pair(&self, qubits: usize) -> Result<(usize, usize)> {
        match self.active_pair {
            Some(pair) => Ok(pair),
            None => default_active_pair(qubits, self.driven_qubit),
        }
    }

    pub fn validate(&self, qubits: usize) -> Result<()> {
        check_tolerance(self.tol, self.max_iters)?;
        if qubits < 2 {
            return Err(HbacError::InvalidConfig(
                "cross-relaxation cooling needs at least two qubits".into(),
            ));
        }
        if self.driven_qubit >= qubits {
            return Err(HbacError::QubitOutOfRange {
                index: self.driven_qubit,
                qubits,
            });
        }
        if self.driven_qubit == 0 {
            return Err(HbacError::InvalidConfig(
                "the target qubit cannot be driven".into(),
            ));
        }
        let (i, j) = self.pair(qubits)?;
        let len = register_len(qubits)?;
        for index in [i, j] {
            if index >= len {
                return Err(HbacError::BasisIndexOutOfRange { index, len });
            }
        }
        if i == j {
            return Err(HbacError::SamePair(i));
        }
        let ratio = self.ratio();
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(HbacError::InvalidRatio(ratio));
        }
        Ok(())
    }
}

/// `|0...0>` paired with the basis state that has only the target and the
/// driven qubit set; `(0, 3)` for two qubits.
pub fn default_active_pair(qubits: usize, driven_qubit: usize) -> Result<(usize, usize)> {
    register_len(qubits)?;
    if driven_qubit == 0 || driven_qubit >= qubits {
        return Err(HbacError::QubitOutOfRange {
            index: driven_qubit,
            qubits,
        });
    }
    let target = 1 << (qubits - 1);
    let driven = 1 << (qubits - 1 - driven_qubit);
    Ok((0, target | driven))
}

pub fn noe_round(state: &DiagonalState, cfg: &NoeConfig) -> Result<DiagonalState> {
    cfg.validate(state.num_qubits())?;
    let (i, j) = cfg.pair(state.num_qubits())?;
    round_unchecked(state, cfg, (i, j), cfg.ratio())
}

fn round_unchecked(
    state: &DiagonalState,
    cfg: &NoeConfig,
    (i, j): (usize, usize),
    ratio: f64,
) -> Result<DiagonalState> {
    saturate(&state_reset(state, i, j, ratio)?, cfg.driven_qubit)
}

/// Iterates [`noe_round`] to its fixed point. Polarizations are recorded at
/// round boundaries, i.e. right after saturation.
pub fn run_noe(initial: &DiagonalState, cfg: &NoeConfig) -> Result<RunReport> {
    cfg.validate(initial.num_qubits())?;
    let pair = cfg.pair(initial.num_qubits())?;
    let ratio = cfg.ratio();
    iterate_to_fixed_point(
        Protocol::Noe,
        cfg.bath,
        initial,
        cfg.tol,
        cfg.max_iters,
        |s| round_unchecked(s, cfg, pair, ratio),
    )
}

/// Steady target polarization of the two-qubit protocol for a given
/// equilibrium ratio: `(r - 1) / (r + 1)`.
pub fn two_qubit_fixed_point(ratio: f64) -> f64 {
    (ratio - 1.0) / (ratio + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnhancementReport {
    pub eps_ppa: f64,
    pub eps_noe: f64,
    /// `eps_noe / eps_ppa`, undefined when the PPA polarization is zero.
    pub ratio: Option<f64>,
    pub excess: f64,
}

/// Compares the target polarizations of a converged PPA run and a converged
/// cross-relaxation run on the same register and bath.
pub fn enhancement_report(ppa: &RunReport, noe: &RunReport) -> Result<EnhancementReport> {
    ppa.ensure_converged()?;
    noe.ensure_converged()?;
    if ppa.num_qubits() != noe.num_qubits() {
        return Err(HbacError::Incompatible(format!(
            "qubit counts differ ({} vs {})",
            ppa.num_qubits(),
            noe.num_qubits()
        )));
    }
    if ppa.bath != noe.bath {
        return Err(HbacError::Incompatible(format!(
            "bath polarizations differ ({} vs {})",
            ppa.bath.polarization(),
            noe.bath.polarization()
        )));
    }
    let eps_ppa = ppa.target_polarization();
    let eps_noe = noe.target_polarization();
    Ok(EnhancementReport {
        eps_ppa,
        eps_noe,
        ratio: (eps_ppa != 0.0).then(|| eps_noe / eps_ppa),
        excess: eps_noe - eps_ppa,
    })
}
