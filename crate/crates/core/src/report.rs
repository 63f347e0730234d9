//! JSON report schema.
//!
//! Field order is fixed by the struct definitions and every float is written
//! in scientific notation with 17 significant digits, so a report parses back
//! to exactly the values that produced it and identical runs give
//! byte-identical files. Non-finite values are written as `null`.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::ScenarioKind;
use crate::noe::EnhancementReport;
use crate::run::RunReport;
use crate::solomon::DriveMode;

pub const SCHEMA_VERSION: u32 = 1;

/// Float serialized with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F17(pub f64);

pub fn format_f17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw =
                RawValue::from_string(format_f17(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(serializer)
        } else {
            serializer.serialize_none()
        }
    }
}

fn f17s(values: &[f64]) -> Vec<F17> {
    values.iter().copied().map(F17).collect()
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub scenario: ScenarioKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solomon: Option<SolomonSummary>,
    pub all_converged: bool,
}

#[derive(Debug, Serialize)]
pub struct PointSummary {
    pub bath_polarization: F17,
    pub delta: F17,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ppa: Option<RunSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noe: Option<RunSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enhancement: Option<EnhancementSummary>,
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub iterations: usize,
    pub converged: bool,
    pub settled_round: usize,
    pub last_change: F17,
    pub target_polarization: F17,
    pub final_polarizations: Vec<F17>,
    pub final_populations: Vec<F17>,
}

impl From<&RunReport> for RunSummary {
    fn from(run: &RunReport) -> Self {
        Self {
            iterations: run.iterations,
            converged: run.converged,
            settled_round: run.settled_round,
            last_change: F17(run.last_change),
            target_polarization: F17(run.target_polarization()),
            final_polarizations: f17s(run.final_polarizations.as_slice()),
            final_populations: f17s(run.final_state.populations()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EnhancementSummary {
    pub eps_ppa: F17,
    pub eps_noe: F17,
    pub ratio: Option<F17>,
    pub excess: F17,
}

impl From<&EnhancementReport> for EnhancementSummary {
    fn from(e: &EnhancementReport) -> Self {
        Self {
            eps_ppa: F17(e.eps_ppa),
            eps_noe: F17(e.eps_noe),
            ratio: e.ratio.map(F17),
            excess: F17(e.excess),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolomonSummary {
    pub rho1: F17,
    pub rho2: F17,
    pub sigma: F17,
    pub s1_eq: F17,
    pub s2_eq: F17,
    pub mode: DriveMode,
    pub t_end: F17,
    pub dt: F17,
    pub samples: usize,
    pub terminal_s1: F17,
    pub terminal_s2: F17,
    /// Analytic spin-1 steady state for the drive mode.
    pub steady_state: F17,
    pub terminal_error: F17,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            2.0 * 0.1 / 1.01,
            1e-300,
            -0.0,
            5e-324,
            123456.789,
        ] {
            let s = format_f17(x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(
                mantissa.chars().filter(char::is_ascii_digit).count(),
                17,
                "{s}"
            );
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let json = serde_json::to_string(&F17(x)).unwrap();
            assert_eq!(json, s);
            assert_eq!(serde_json::from_str::<f64>(&json).unwrap(), x);
        }
        assert_eq!(format_f17(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(serde_json::to_string(&F17(f64::NAN)).unwrap(), "null");
        assert_eq!(serde_json::to_string(&F17(f64::INFINITY)).unwrap(), "null");
    }
}
