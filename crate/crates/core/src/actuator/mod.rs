//! Pulley actuator driven by two identical antagonist muscles.
//!
//! Muscle 1 (agonist) contracts as the joint angle grows:
//! `ε1 = ε0 + Rθ/l0`, `ε2 = ε0 − Rθ/l0`. Torque is `T = R (F1 − F2)` and
//! stiffness is `K = −∂T/∂θ`.

mod festo;
mod hogan;
mod mckibben;
mod sweep;

pub use festo::init_contraction;
pub use sweep::{
    sweep_inverse, sweep_inverse_with, Execution, Grid, InverseModel, SweepRow, SweepTable,
};

use crate::error::{ensure_finite, Error, Result};
use crate::muscle::StaticMuscle;
use crate::units::bar;

/// Default minimum contraction kept in either muscle.
pub const DEFAULT_EPS_THRESHOLD: f64 = 0.025;

/// Slack on the joint-limit and pressure-box boundaries.
const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorConfig {
    /// m
    pub pulley_radius: f64,
    /// Contraction of both muscles at θ = 0.
    pub eps0: f64,
    pub eps_threshold: f64,
    /// Pa
    pub p_min: f64,
    /// Pa
    pub p_max: f64,
}

impl ActuatorConfig {
    pub fn new(
        pulley_radius: f64,
        eps0: f64,
        eps_threshold: f64,
        p_min: f64,
        p_max: f64,
    ) -> Result<Self> {
        for (v, what) in [
            (pulley_radius, "pulley radius"),
            (eps0, "initial contraction"),
            (eps_threshold, "contraction threshold"),
            (p_min, "minimum pressure"),
            (p_max, "maximum pressure"),
        ] {
            ensure_finite(v, what)?;
        }
        if pulley_radius <= 0.0 {
            return Err(Error::Domain(format!(
                "pulley radius {pulley_radius} m must be positive"
            )));
        }
        if !(eps_threshold >= 0.0 && eps_threshold < eps0 && eps0 < 1.0) {
            return Err(Error::Domain(format!(
                "need 0 ≤ threshold ({eps_threshold}) < ε0 ({eps0}) < 1"
            )));
        }
        if !(p_min >= 0.0 && p_min < p_max) {
            return Err(Error::Domain(format!(
                "pressure box [{p_min}, {p_max}] Pa is empty or negative"
            )));
        }
        Ok(Self {
            pulley_radius,
            eps0,
            eps_threshold,
            p_min,
            p_max,
        })
    }

    /// Threshold 0.025 and a 0–5 bar pressure box.
    pub fn with_defaults(pulley_radius: f64, eps0: f64) -> Result<Self> {
        Self::new(pulley_radius, eps0, DEFAULT_EPS_THRESHOLD, 0.0, bar(5.0))
    }

    fn in_box(&self, p: f64) -> bool {
        let tol = BOUNDARY_TOL * self.p_max;
        p >= self.p_min - tol && p <= self.p_max + tol
    }

    fn clip(&self, p: f64) -> f64 {
        p.clamp(self.p_min, self.p_max)
    }
}

/// Control pressures in Pa; muscle 1 is the agonist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressurePair {
    pub p1: f64,
    pub p2: f64,
}

impl PressurePair {
    pub fn new(p1: f64, p2: f64) -> Self {
        Self { p1, p2 }
    }

    pub fn difference(&self) -> f64 {
        self.p1 - self.p2
    }

    pub fn sum(&self) -> f64 {
        self.p1 + self.p2
    }

    fn from_sum_difference(sum: f64, difference: f64) -> Self {
        Self {
            p1: 0.5 * (sum + difference),
            p2: 0.5 * (sum - difference),
        }
    }
}

/// Normalized neural activations of the two muscles of the linear model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Activation {
    pub u1: f64,
    pub u2: f64,
}

impl Activation {
    pub fn new(u1: f64, u2: f64) -> Self {
        Self { u1, u2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueStiffness {
    /// N·m
    pub torque: f64,
    /// N·m/rad
    pub stiffness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feasibility {
    /// Exact solution inside the pressure box and the contraction domain.
    Feasible,
    /// A solution exists but violates the box or the contraction domain.
    ClippedInfeasible,
    /// No real solution of the inverse equations.
    NoRealRoot,
}

impl Feasibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Feasibility::Feasible => "feasible",
            Feasibility::ClippedInfeasible => "clipped-infeasible",
            Feasibility::NoRealRoot => "no-real-root",
        }
    }
}

impl std::str::FromStr for Feasibility {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "feasible" => Ok(Feasibility::Feasible),
            "clipped-infeasible" => Ok(Feasibility::ClippedInfeasible),
            "no-real-root" => Ok(Feasibility::NoRealRoot),
            other => Err(Error::Schema(format!("unknown feasibility tag `{other}`"))),
        }
    }
}

impl std::fmt::Display for Feasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of an inverse model: the command, how it was classified, and the
/// residuals of re-evaluating the direct model at that command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSolution<C> {
    /// Unclipped command; `None` when no real solution exists.
    pub command: Option<C>,
    pub feasibility: Feasibility,
    /// `|T_achieved − T_requested|`, N·m.
    pub torque_residual: f64,
    /// `|K_achieved − K_requested|`, N·m/rad.
    pub stiffness_residual: f64,
}

impl<C> InverseSolution<C> {
    fn no_root() -> Self {
        Self {
            command: None,
            feasibility: Feasibility::NoRealRoot,
            torque_residual: f64::NAN,
            stiffness_residual: f64::NAN,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasibility == Feasibility::Feasible
    }
}

impl InverseSolution<PressurePair> {
    /// Command clipped into the pressure box.
    pub fn clipped(&self, config: &ActuatorConfig) -> Option<PressurePair> {
        self.command
            .map(|c| PressurePair::new(config.clip(c.p1), config.clip(c.p2)))
    }
}

/// An antagonist actuator built from two copies of `muscle`.
#[derive(Debug, Clone, PartialEq)]
pub struct Actuator<M> {
    pub muscle: M,
    pub config: ActuatorConfig,
}

impl<M: StaticMuscle> Actuator<M> {
    pub fn rest_length(&self) -> f64 {
        self.muscle.rest_length()
    }

    /// Symmetric joint range `±(l0/R)(ε0 − ε_threshold)`.
    pub fn joint_limits(&self) -> (f64, f64) {
        let c = &self.config;
        let theta_max = self.rest_length() / c.pulley_radius * (c.eps0 - c.eps_threshold);
        (-theta_max, theta_max)
    }

    pub(crate) fn check_angle(&self, theta: f64) -> Result<()> {
        ensure_finite(theta, "joint angle")?;
        let (_, theta_max) = self.joint_limits();
        if theta.abs() > theta_max * (1.0 + BOUNDARY_TOL) + f64::EPSILON {
            return Err(Error::JointOutOfRange { theta, theta_max });
        }
        Ok(())
    }

    /// `Rθ/l0`
    pub(crate) fn stroke(&self, theta: f64) -> f64 {
        self.config.pulley_radius * theta / self.rest_length()
    }

    /// `(ε1, ε2)` at joint angle `theta` (rad).
    pub fn contraction_ratios(&self, theta: f64) -> Result<(f64, f64)> {
        self.check_angle(theta)?;
        let x = self.stroke(theta);
        Ok((self.config.eps0 + x, self.config.eps0 - x))
    }

    /// Torque and stiffness composed from the single-muscle force and
    /// stiffness, valid for any muscle model. `drive1`/`drive2` are pressures
    /// in Pa, or activations for the linear model.
    pub fn compose(&self, drive1: f64, drive2: f64, theta: f64) -> Result<TorqueStiffness> {
        let (e1, e2) = self.contraction_ratios(theta)?;
        let r = self.config.pulley_radius;
        let f1 = self.muscle.force(e1, drive1)?;
        let f2 = self.muscle.force(e2, drive2)?;
        let k1 = self.muscle.stiffness(e1, drive1)?;
        let k2 = self.muscle.stiffness(e2, drive2)?;
        Ok(TorqueStiffness {
            torque: r * (f1 - f2),
            stiffness: r * r * (k1 + k2),
        })
    }
}

fn check_box(config: &ActuatorConfig, pp: &PressurePair) -> Result<()> {
    ensure_finite(pp.p1, "pressure P1")?;
    ensure_finite(pp.p2, "pressure P2")?;
    for p in [pp.p1, pp.p2] {
        if !config.in_box(p) {
            return Err(Error::Domain(format!(
                "pressure {p} Pa outside the box [{}, {}] Pa",
                config.p_min, config.p_max
            )));
        }
    }
    Ok(())
}
