//! Two-spin Solomon relaxation in the low-polarization limit.
//!
//! ```text
//! ds1/dt = -rho1 (s1 - s1_eq) - sigma (s2 - s2_eq)
//! ds2/dt = -rho2 (s2 - s2_eq) - sigma (s1 - s1_eq)
//! ```
//!
//! Saturating spin 2 pins `s2 = 0`, which moves the spin-1 steady state to
//! `s1_eq + (sigma / rho1) s2_eq`.

use serde::Serialize;

use crate::error::{HbacError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolomonParams {
    pub rho1: f64,
    pub rho2: f64,
    pub sigma: f64,
    pub s1_eq: f64,
    pub s2_eq: f64,
}

impl SolomonParams {
    /// Requires positive auto-relaxation rates, `rho1 rho2 >= sigma^2` and
    /// equilibrium expectations in `[-1, 1]`.
    pub fn new(rho1: f64, rho2: f64, sigma: f64, s1_eq: f64, s2_eq: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(rho1 > 0.0 && rho1.is_finite()) {
            problems.push(format!("rho1 must be > 0 (got {rho1})"));
        }
        if !(rho2 > 0.0 && rho2.is_finite()) {
            problems.push(format!("rho2 must be > 0 (got {rho2})"));
        }
        if !sigma.is_finite() {
            problems.push(format!("sigma must be finite (got {sigma})"));
        } else if rho1 * rho2 < sigma * sigma {
            problems.push(format!(
                "rho1*rho2 = {} is below sigma^2 = {}",
                rho1 * rho2,
                sigma * sigma
            ));
        }
        for (name, value) in [("s1_eq", s1_eq), ("s2_eq", s2_eq)] {
            if value.is_nan() || value.abs() > 1.0 {
                problems.push(format!("|{name}| must be <= 1 (got {value})"));
            }
        }
        if problems.is_empty() {
            Ok(Self {
                rho1,
                rho2,
                sigma,
                s1_eq,
                s2_eq,
            })
        } else {
            Err(HbacError::InvalidParams(problems.join("; ")))
        }
    }

    /// Largest step accepted by [`integrate`].
    pub fn max_step(&self) -> f64 {
        0.1 / self.rho1.max(self.rho2).max(self.sigma.abs())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveMode {
    #[default]
    Free,
    /// Spin 2 held at zero.
    Saturated,
}

impl DriveMode {
    pub fn is_saturated(self) -> bool {
        matches!(self, DriveMode::Saturated)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinTrajectory {
    pub mode: DriveMode,
    pub t: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
}

impl SpinTrajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn terminal(&self) -> (f64, f64) {
        let last = self.len() - 1;
        (self.s1[last], self.s2[last])
    }
}

pub fn solomon_rhs(params: &SolomonParams, s1: f64, s2: f64, mode: DriveMode) -> (f64, f64) {
    let SolomonParams {
        rho1,
        rho2,
        sigma,
        s1_eq,
        s2_eq,
    } = *params;
    if mode.is_saturated() {
        (-rho1 * (s1 - s1_eq) - sigma * (0.0 - s2_eq), 0.0)
    } else {
        (
            -rho1 * (s1 - s1_eq) - sigma * (s2 - s2_eq),
            -rho2 * (s2 - s2_eq) - sigma * (s1 - s1_eq),
        )
    }
}

fn rk4_step(params: &SolomonParams, s1: f64, s2: f64, h: f64, mode: DriveMode) -> (f64, f64) {
    let (a1, a2) = solomon_rhs(params, s1, s2, mode);
    let (b1, b2) = solomon_rhs(params, s1 + 0.5 * h * a1, s2 + 0.5 * h * a2, mode);
    let (c1, c2) = solomon_rhs(params, s1 + 0.5 * h * b1, s2 + 0.5 * h * b2, mode);
    let (d1, d2) = solomon_rhs(params, s1 + h * c1, s2 + h * c2, mode);
    (
        s1 + h / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1),
        s2 + h / 6.0 * (a2 + 2.0 * b2 + 2.0 * c2 + d2),
    )
}

/// Classical fixed-step RK4 from `t = 0` to `t_end`.
///
/// Samples sit at `k * dt`; when `t_end` is not a multiple of `dt` the last
/// step is shortened to land on `t_end`. In saturated mode `s2` is pinned to
/// zero from the first sample on.
pub fn integrate(
    params: &SolomonParams,
    s1_0: f64,
    s2_0: f64,
    t_end: f64,
    dt: f64,
    mode: DriveMode,
) -> Result<SpinTrajectory> {
    let bound = params.max_step();
    if !(dt > 0.0 && dt.is_finite()) || dt > bound * (1.0 + 1e-12) {
        return Err(HbacError::StepTooLarge { dt, bound });
    }
    if !(t_end.is_finite() && t_end >= dt * (1.0 - 1e-12)) {
        return Err(HbacError::InvalidParams(format!(
            "t_end = {t_end} must be at least dt = {dt}"
        )));
    }
    if !(s1_0.is_finite() && s2_0.is_finite()) {
        return Err(HbacError::InvalidParams(
            "initial values must be finite".into(),
        ));
    }

    let ratio = t_end / dt;
    let steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };

    let mut s1 = s1_0;
    let mut s2 = if mode.is_saturated() { 0.0 } else { s2_0 };
    let mut traj = SpinTrajectory {
        mode,
        t: Vec::with_capacity(steps + 1),
        s1: Vec::with_capacity(steps + 1),
        s2: Vec::with_capacity(steps + 1),
    };
    traj.t.push(0.0);
    traj.s1.push(s1);
    traj.s2.push(s2);

    for k in 1..=steps {
        let t_prev = (k - 1) as f64 * dt;
        let t = if k == steps { t_end } else { k as f64 * dt };
        (s1, s2) = rk4_step(params, s1, s2, t - t_prev, mode);
        traj.t.push(t);
        traj.s1.push(s1);
        traj.s2.push(s2);
    }
    Ok(traj)
}

/// Spin-1 steady state with spin 2 saturated.
pub fn steady_state_saturated(params: &SolomonParams) -> f64 {
    params.s1_eq + params.sigma / params.rho1 * params.s2_eq
}
