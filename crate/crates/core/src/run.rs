//! Fixed-point iteration of protocol rounds and the resulting run record.

use std::fmt;

use serde::Serialize;

use crate::error::{HbacError, Result};
use crate::state::{BathSpec, DiagonalState, PolarizationVector};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Ppa,
    Noe,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Ppa => "ppa",
            Protocol::Noe => "noe",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub protocol: Protocol,
    pub bath: BathSpec,
    /// Rounds applied, including the round that confirmed convergence.
    pub iterations: usize,
    pub converged: bool,
    /// First trajectory index from which no round changed the state by more
    /// than the tolerance.
    pub settled_round: usize,
    /// L1 change made by the last round.
    pub last_change: f64,
    /// Polarizations of the initial state followed by one entry per round.
    pub trajectory: Vec<PolarizationVector>,
    pub final_state: DiagonalState,
    pub final_polarizations: PolarizationVector,
}

impl RunReport {
    pub fn target_polarization(&self) -> f64 {
        self.final_polarizations.target()
    }

    pub fn num_qubits(&self) -> usize {
        self.final_state.num_qubits()
    }

    /// Turns an unconverged run into [`HbacError::NonConvergence`].
    pub fn ensure_converged(&self) -> Result<&Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(HbacError::NonConvergence {
                iterations: self.iterations,
                last_change: self.last_change,
            })
        }
    }
}

pub(crate) fn check_tolerance(tol: f64, max_iters: usize) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(HbacError::InvalidConfig(format!(
            "tol must be > 0, got {tol}"
        )));
    }
    if max_iters == 0 {
        return Err(HbacError::InvalidConfig("max_iters must be >= 1".into()));
    }
    Ok(())
}

/// Applies `round` until one application moves the state by at most `tol`
/// in L1, or `max_iters` rounds have run.
pub(crate) fn iterate_to_fixed_point<F>(
    protocol: Protocol,
    bath: BathSpec,
    initial: &DiagonalState,
    tol: f64,
    max_iters: usize,
    mut round: F,
) -> Result<RunReport>
where
    F: FnMut(&DiagonalState) -> Result<DiagonalState>,
{
    let mut current = initial.clone();
    let mut trajectory = vec![current.polarizations()];
    let mut settled_round = 0;
    let mut last_change = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iters {
        let next = round(&current)?;
        iterations += 1;
        last_change = current.l1_distance(&next)?;
        trajectory.push(next.polarizations());
        current = next;
        if last_change <= tol {
            converged = true;
            break;
        }
        settled_round = iterations;
    }

    let final_polarizations = current.polarizations();
    Ok(RunReport {
        protocol,
        bath,
        iterations,
        converged,
        settled_round,
        last_change,
        trajectory,
        final_state: current,
        final_polarizations,
    })
}
