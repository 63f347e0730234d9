//! Partner Pairing Algorithm: bath refresh of the reset qubits followed by
//! SORT, iterated to a steady state.

use crate::channels::{refresh_all, sort_step};
use crate::error::{HbacError, Result};
use crate::run::{
    check_tolerance, iterate_to_fixed_point, Protocol, RunReport, DEFAULT_MAX_ITERS,
    DEFAULT_TOLERANCE,
};
use crate::state::{BathSpec, DiagonalState};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RoundOrder {
    #[default]
    RefreshThenSort,
    SortThenRefresh,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PpaConfig {
    pub reset_qubits: Vec<usize>,
    pub bath: BathSpec,
    pub tol: f64,
    pub max_iters: usize,
    pub order: RoundOrder,
}

impl PpaConfig {
    pub fn new(reset_qubits: Vec<usize>, bath: BathSpec) -> Self {
        Self {
            reset_qubits,
            bath,
            tol: DEFAULT_TOLERANCE,
            max_iters: DEFAULT_MAX_ITERS,
            order: RoundOrder::default(),
        }
    }

    /// Qubit 0 is the target, every other qubit is a reset qubit.
    pub fn single_target(qubits: usize, bath: BathSpec) -> Self {
        Self::new((1..qubits).collect(), bath)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_order(mut self, order: RoundOrder) -> Self {
        self.order = order;
        self
    }

    pub fn validate(&self, qubits: usize) -> Result<()> {
        check_tolerance(self.tol, self.max_iters)?;
        if self.reset_qubits.is_empty() {
            return Err(HbacError::InvalidConfig("no reset qubits".into()));
        }
        for (i, &q) in self.reset_qubits.iter().enumerate() {
            if q >= qubits {
                return Err(HbacError::QubitOutOfRange { index: q, qubits });
            }
            if self.reset_qubits[..i].contains(&q) {
                return Err(HbacError::InvalidConfig(format!(
                    "reset qubit {q} listed twice"
                )));
            }
        }
        Ok(())
    }
}

pub fn ppa_round(state: &DiagonalState, cfg: &PpaConfig) -> Result<DiagonalState> {
    cfg.validate(state.num_qubits())?;
    round_unchecked(state, cfg)
}

fn round_unchecked(state: &DiagonalState, cfg: &PpaConfig) -> Result<DiagonalState> {
    match cfg.order {
        RoundOrder::RefreshThenSort => {
            Ok(sort_step(&refresh_all(state, &cfg.reset_qubits, cfg.bath)?))
        }
        RoundOrder::SortThenRefresh => refresh_all(&sort_step(state), &cfg.reset_qubits, cfg.bath),
    }
}

/// Runs PPA rounds from `initial` until the L1 change of a round drops to
/// `cfg.tol`. Hitting `cfg.max_iters` is reported through
/// [`RunReport::converged`], not as an error.
pub fn run_ppa(initial: &DiagonalState, cfg: &PpaConfig) -> Result<RunReport> {
    cfg.validate(initial.num_qubits())?;
    iterate_to_fixed_point(
        Protocol::Ppa,
        cfg.bath,
        initial,
        cfg.tol,
        cfg.max_iters,
        |s| round_unchecked(s, cfg),
    )
}
