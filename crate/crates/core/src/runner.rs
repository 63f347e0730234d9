//! Scenario execution behind the `hbac` binary.

use std::fs;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::config::{OutputFormat, ScenarioConfig, ScenarioKind, SolomonScenario};
use crate::error::Result;
use crate::noe::{enhancement_report, run_noe, EnhancementReport, NoeConfig};
use crate::ppa::{run_ppa, PpaConfig};
use crate::report::{
    format_f17, EnhancementSummary, PointSummary, Report, RunSummary, SolomonSummary, F17,
    SCHEMA_VERSION,
};
use crate::run::RunReport;
use crate::solomon::{integrate, steady_state_saturated, SpinTrajectory};
use crate::state::{BathSpec, DiagonalState};

/// Results for one bath polarization.
#[derive(Clone, Debug)]
pub struct PointResult {
    pub bath: BathSpec,
    pub ppa: Option<RunReport>,
    pub noe: Option<RunReport>,
    pub enhancement: Option<EnhancementReport>,
}

impl PointResult {
    fn converged(&self) -> bool {
        self.ppa.as_ref().is_none_or(|r| r.converged)
            && self.noe.as_ref().is_none_or(|r| r.converged)
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioOutcome {
    pub config: ScenarioConfig,
    pub points: Vec<PointResult>,
    pub solomon: Option<SpinTrajectory>,
}

fn run_point(cfg: &ScenarioConfig, eps: f64) -> Result<PointResult> {
    let bath = BathSpec::new(eps)?;
    let initial = DiagonalState::maximally_mixed(cfg.qubits)?;

    let ppa = matches!(cfg.scenario, ScenarioKind::Ppa | ScenarioKind::Compare)
        .then(|| {
            let reset = cfg
                .reset_qubits
                .clone()
                .unwrap_or_else(|| (1..cfg.qubits).collect());
            let ppa_cfg = PpaConfig::new(reset, bath)
                .with_tol(cfg.tol)
                .with_max_iters(cfg.max_iters);
            run_ppa(&initial, &ppa_cfg)
        })
        .transpose()?;

    let noe = matches!(cfg.scenario, ScenarioKind::Noe | ScenarioKind::Compare)
        .then(|| {
            let mut noe_cfg = NoeConfig::new(bath)
                .with_driven_qubit(cfg.driven_qubit)
                .with_tol(cfg.tol)
                .with_max_iters(cfg.max_iters);
            noe_cfg.ratio_override = cfg.ratio;
            run_noe(&initial, &noe_cfg)
        })
        .transpose()?;

    let enhancement = match (&ppa, &noe) {
        (Some(p), Some(n)) if p.converged && n.converged => Some(enhancement_report(p, n)?),
        _ => None,
    };

    Ok(PointResult {
        bath,
        ppa,
        noe,
        enhancement,
    })
}

fn run_solomon(s: &SolomonScenario) -> Result<SpinTrajectory> {
    integrate(&s.params, s.s1_0, s.s2_0, s.t_end, s.dt, s.mode)
}

/// Runs every requested computation. Sweep points are evaluated in
/// parallel; results keep the order of the sweep list.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let (points, solomon) = match cfg.scenario {
        ScenarioKind::Solomon => {
            let block = cfg.solomon.as_ref().ok_or_else(|| {
                crate::error::HbacError::InvalidConfig("missing solomon parameters".into())
            })?;
            (Vec::new(), Some(run_solomon(block)?))
        }
        _ => {
            let points = cfg
                .bath_points()
                .par_iter()
                .map(|&eps| run_point(cfg, eps))
                .collect::<Result<Vec<_>>>()?;
            (points, None)
        }
    };
    Ok(ScenarioOutcome {
        config: cfg.clone(),
        points,
        solomon,
    })
}

impl ScenarioOutcome {
    pub fn all_converged(&self) -> bool {
        self.points.iter().all(PointResult::converged)
    }

    pub fn report(&self) -> Report {
        let cfg = &self.config;
        let protocol_run = cfg.scenario != ScenarioKind::Solomon;
        Report {
            schema_version: SCHEMA_VERSION,
            scenario: cfg.scenario,
            qubits: protocol_run.then_some(cfg.qubits),
            tol: protocol_run.then_some(F17(cfg.tol)),
            max_iters: protocol_run.then_some(cfg.max_iters),
            points: self
                .points
                .iter()
                .map(|p| PointSummary {
                    bath_polarization: F17(p.bath.polarization()),
                    delta: F17(p.bath.delta()),
                    ppa: p.ppa.as_ref().map(RunSummary::from),
                    noe: p.noe.as_ref().map(RunSummary::from),
                    enhancement: p.enhancement.as_ref().map(EnhancementSummary::from),
                })
                .collect(),
            solomon: self
                .solomon
                .as_ref()
                .zip(cfg.solomon.as_ref())
                .map(|(traj, s)| {
                    let (s1, s2) = traj.terminal();
                    let steady = if s.mode.is_saturated() {
                        steady_state_saturated(&s.params)
                    } else {
                        s.params.s1_eq
                    };
                    SolomonSummary {
                        rho1: F17(s.params.rho1),
                        rho2: F17(s.params.rho2),
                        sigma: F17(s.params.sigma),
                        s1_eq: F17(s.params.s1_eq),
                        s2_eq: F17(s.params.s2_eq),
                        mode: s.mode,
                        t_end: F17(s.t_end),
                        dt: F17(s.dt),
                        samples: traj.len(),
                        terminal_s1: F17(s1),
                        terminal_s2: F17(s2),
                        steady_state: F17(steady),
                        terminal_error: F17((s1 - steady).abs()),
                    }
                }),
            all_converged: self.all_converged(),
        }
    }

    pub fn to_json(&self) -> String {
        self.report().to_json()
    }

    /// CSV view of the run.
    ///
    /// * solomon: `t,s1,s2`, one row per sample;
    /// * compare: one row per sweep point with both steady states;
    /// * ppa / noe: per-round polarization trajectories of every point.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let f = |x: f64| format_f17(x);
        match self.config.scenario {
            ScenarioKind::Solomon => {
                w.write_record(["t", "s1", "s2"]).unwrap();
                if let Some(traj) = &self.solomon {
                    for k in 0..traj.len() {
                        w.write_record([f(traj.t[k]), f(traj.s1[k]), f(traj.s2[k])])
                            .unwrap();
                    }
                }
            }
            ScenarioKind::Compare => {
                w.write_record([
                    "bath_polarization",
                    "eps_ppa",
                    "eps_noe",
                    "ratio",
                    "excess",
                    "ppa_iterations",
                    "noe_iterations",
                    "converged",
                ])
                .unwrap();
                for p in &self.points {
                    let ppa = p.ppa.as_ref().expect("compare runs ppa");
                    let noe = p.noe.as_ref().expect("compare runs noe");
                    let ratio = p
                        .enhancement
                        .and_then(|e| e.ratio)
                        .map(f)
                        .unwrap_or_default();
                    w.write_record([
                        f(p.bath.polarization()),
                        f(ppa.target_polarization()),
                        f(noe.target_polarization()),
                        ratio,
                        f(noe.target_polarization() - ppa.target_polarization()),
                        ppa.iterations.to_string(),
                        noe.iterations.to_string(),
                        p.converged().to_string(),
                    ])
                    .unwrap();
                }
            }
            ScenarioKind::Ppa | ScenarioKind::Noe => {
                let mut header = vec!["bath_polarization".to_owned(), "round".to_owned()];
                header.extend((0..self.config.qubits).map(|q| format!("eps_{q}")));
                w.write_record(&header).unwrap();
                for p in &self.points {
                    let run = p.ppa.as_ref().or(p.noe.as_ref()).expect("one protocol ran");
                    for (round, pol) in run.trajectory.iter().enumerate() {
                        let mut row = vec![f(p.bath.polarization()), round.to_string()];
                        row.extend(pol.as_slice().iter().map(|&e| f(e)));
                        w.write_record(&row).unwrap();
                    }
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }

    pub fn render(&self) -> String {
        match self.config.format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    /// Writes the rendered output to the configured path, or to `stdout`
    /// when none is set.
    pub fn write(&self, stdout: &mut dyn Write) -> io::Result<()> {
        let text = self.render();
        match &self.config.output {
            Some(path) => fs::write(path, text),
            None => stdout.write_all(text.as_bytes()),
        }
    }
}
