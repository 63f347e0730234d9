//! Scenario configuration files (TOML).
//!
//! ```toml
//! scenario = "compare"          # ppa | noe | solomon | compare
//! qubits = 2
//! bath_polarization = 0.1       # or: sweep = [0.001, 0.01, 0.1]
//! tol = 1e-12
//! max_iters = 1000000
//! reset_qubits = [1]            # ppa; default: every qubit but 0
//! driven_qubit = 1              # noe
//! ratio = 1.4938                # noe; default e^{4 delta}
//! output = "report.json"
//! format = "json"               # json | csv
//!
//! [solomon]
//! rho1 = 1.0
//! rho2 = 1.0
//! sigma = 0.5
//! s1_eq = 1.0
//! s2_eq = 1.0
//! t_end = 30.0
//! dt = 0.01
//! saturated = true              # default
//! s1_0 = 1.0                    # default s1_eq
//! s2_0 = 1.0                    # default s2_eq
//! ```
//!
//! Unknown keys are rejected.

use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::run::{DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE};
use crate::solomon::{DriveMode, SolomonParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Ppa,
    Noe,
    Solomon,
    Compare,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::Ppa => "ppa",
            ScenarioKind::Noe => "noe",
            ScenarioKind::Solomon => "solomon",
            ScenarioKind::Compare => "compare",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// Raw contents of a config file, before overrides and validation.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<ScenarioKind>,
    pub qubits: Option<usize>,
    pub bath_polarization: Option<f64>,
    pub sweep: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub reset_qubits: Option<Vec<usize>>,
    pub driven_qubit: Option<usize>,
    pub ratio: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub solomon: Option<SolomonBlock>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolomonBlock {
    pub rho1: f64,
    pub rho2: f64,
    pub sigma: f64,
    pub s1_eq: f64,
    pub s2_eq: f64,
    pub t_end: f64,
    pub dt: f64,
    #[serde(default = "default_saturated")]
    pub saturated: bool,
    pub s1_0: Option<f64>,
    pub s2_0: Option<f64>,
}

fn default_saturated() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolomonScenario {
    pub params: SolomonParams,
    pub s1_0: f64,
    pub s2_0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub mode: DriveMode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub qubits: usize,
    pub bath_polarization: Option<f64>,
    pub sweep: Vec<f64>,
    pub tol: f64,
    pub max_iters: usize,
    pub reset_qubits: Option<Vec<usize>>,
    pub driven_qubit: usize,
    pub ratio: Option<f64>,
    pub solomon: Option<SolomonScenario>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ScenarioConfig {
    /// Bath polarizations to run, in order: the sweep list when given,
    /// otherwise the single bath polarization.
    pub fn bath_points(&self) -> Vec<f64> {
        if self.sweep.is_empty() {
            self.bath_polarization.into_iter().collect()
        } else {
            self.sweep.clone()
        }
    }
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string().trim_end().to_owned()))
}

/// Parses and validates a complete config.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    parse_config_file(text)?.validate()
}

fn check_bath(name: &str, eps: f64, problems: &mut Vec<String>) {
    if !(0.0..1.0).contains(&eps) {
        problems.push(format!("{name} must lie in [0, 1), got {eps}"));
    }
}

impl ConfigFile {
    pub fn validate(self) -> Result<ScenarioConfig, ConfigError> {
        let mut problems = Vec::new();

        let Some(scenario) = self.scenario else {
            return Err(ConfigError::Invalid(vec!["missing key `scenario`".into()]));
        };

        let qubits = self.qubits.unwrap_or(2);
        let tol = self.tol.unwrap_or(DEFAULT_TOLERANCE);
        let max_iters = self.max_iters.unwrap_or(DEFAULT_MAX_ITERS);
        let driven_qubit = self.driven_qubit.unwrap_or(1);
        let sweep = self.sweep.unwrap_or_default();

        if !(tol > 0.0 && tol.is_finite()) {
            problems.push(format!("tol must be > 0, got {tol}"));
        }
        if max_iters == 0 {
            problems.push("max_iters must be >= 1".into());
        }

        let mut solomon = None;
        match scenario {
            ScenarioKind::Solomon => match self.solomon {
                None => problems.push("scenario `solomon` requires a [solomon] table".into()),
                Some(block) => match SolomonParams::new(
                    block.rho1,
                    block.rho2,
                    block.sigma,
                    block.s1_eq,
                    block.s2_eq,
                ) {
                    Err(e) => problems.push(format!("solomon: {e}")),
                    Ok(params) => {
                        let bound = params.max_step();
                        if block.dt.is_nan() || block.dt <= 0.0 || block.dt > bound * (1.0 + 1e-12)
                        {
                            problems.push(format!(
                                "solomon.dt = {} must lie in (0, {bound}]",
                                block.dt
                            ));
                        }
                        if block.t_end.is_nan() || block.t_end < block.dt {
                            problems.push(format!("solomon.t_end = {} must be >= dt", block.t_end));
                        }
                        solomon = Some(SolomonScenario {
                            params,
                            s1_0: block.s1_0.unwrap_or(block.s1_eq),
                            s2_0: block.s2_0.unwrap_or(block.s2_eq),
                            t_end: block.t_end,
                            dt: block.dt,
                            mode: if block.saturated {
                                DriveMode::Saturated
                            } else {
                                DriveMode::Free
                            },
                        });
                    }
                },
            },
            ScenarioKind::Ppa | ScenarioKind::Noe | ScenarioKind::Compare => {
                if self.bath_polarization.is_none() && sweep.is_empty() {
                    problems.push(format!(
                        "scenario `{scenario}` requires `bath_polarization` or a non-empty `sweep`"
                    ));
                }
                if let Some(eps) = self.bath_polarization {
                    check_bath("bath_polarization", eps, &mut problems);
                }
                for (k, &eps) in sweep.iter().enumerate() {
                    check_bath(&format!("sweep[{k}]"), eps, &mut problems);
                }
                if !(2..=20).contains(&qubits) {
                    problems.push(format!("qubits must lie in [2, 20], got {qubits}"));
                }
                if scenario != ScenarioKind::Noe {
                    if let Some(reset) = &self.reset_qubits {
                        if reset.is_empty() {
                            problems.push("reset_qubits must not be empty".into());
                        }
                        for &q in reset {
                            if q >= qubits {
                                problems.push(format!(
                                    "reset qubit {q} out of range for {qubits} qubits"
                                ));
                            }
                        }
                    }
                }
                if scenario != ScenarioKind::Ppa {
                    if driven_qubit == 0 || driven_qubit >= qubits {
                        problems.push(format!(
                            "driven_qubit must lie in [1, {}], got {driven_qubit}",
                            qubits.saturating_sub(1)
                        ));
                    }
                    if let Some(r) = self.ratio {
                        if !(r > 0.0 && r.is_finite()) {
                            problems.push(format!("ratio must be > 0, got {r}"));
                        }
                    }
                }
            }
        }

        if !problems.is_empty() {
            return Err(ConfigError::Invalid(problems));
        }
        Ok(ScenarioConfig {
            scenario,
            qubits,
            bath_polarization: self.bath_polarization,
            sweep,
            tol,
            max_iters,
            reset_qubits: self.reset_qubits,
            driven_qubit,
            ratio: self.ratio,
            solomon,
            output: self.output,
            format: self.format.unwrap_or_default(),
        })
    }
}
