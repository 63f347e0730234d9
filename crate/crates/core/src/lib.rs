//! Heat-bath algorithmic cooling on diagonal qubit registers.
//!
//! * [`state`]: population vectors, bath polarization, marginals.
//! * [`channels`]: SORT, bath refresh, two-level state reset, saturation.
//! * [`ppa`]: the Partner Pairing Algorithm iterated to its steady state.
//! * [`noe`]: cross-relaxation cooling (state reset + saturation) and its
//!   comparison with PPA.
//! * [`solomon`]: two-spin Solomon relaxation equations and their RK4
//!   integration.
//! * [`config`], [`report`], [`runner`]: scenario files, JSON/CSV reports and
//!   the driver used by the `hbac` binary.

pub mod channels;
pub mod config;
pub mod error;
pub mod noe;
pub mod ppa;
pub mod report;
pub mod run;
pub mod runner;
pub mod solomon;
pub mod state;

pub use channels::{
    apply_permutation, refresh_reset, saturate, sort_step, state_reset, ProtocolStep,
};
pub use error::{HbacError, Result};
pub use noe::{enhancement_report, noe_round, run_noe, EnhancementReport, NoeConfig};
pub use ppa::{ppa_round, run_ppa, PpaConfig, RoundOrder};
pub use run::{Protocol, RunReport};
pub use solomon::{
    integrate, solomon_rhs, steady_state_saturated, DriveMode, SolomonParams, SpinTrajectory,
};
pub use state::{thermal_qubit, BathSpec, DiagonalState, PolarizationVector};
