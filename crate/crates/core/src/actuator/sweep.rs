//! Inverse-model sweeps over a (stiffness, angle) grid.
//!
//! Grid points are independent; with the `parallel` feature they are solved
//! on the rayon pool. Rows always come back stiffness-major, angle-minor,
//! in ascending order, whichever execution is used.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{Actuator, InverseSolution, PressurePair};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::MuscleGeometry;
use crate::muscle::RationalFestoParams;

/// Inclusive arithmetic grid `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        ensure_finite(start, "grid start")?;
        ensure_finite(stop, "grid stop")?;
        ensure_finite(step, "grid step")?;
        if stop < start || step <= 0.0 {
            return Err(Error::Empty("grid"));
        }
        Ok(Self { start, stop, step })
    }

    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

/// Equilibrium inverse model usable in a sweep.
pub trait InverseModel: Sync {
    /// Pressures holding zero torque at `theta` (rad) with stiffness `k` (N·m/rad).
    fn solve(&self, theta: f64, k: f64) -> Result<InverseSolution<PressurePair>>;

    fn theta_limit(&self) -> f64;
}

impl InverseModel for Actuator<MuscleGeometry> {
    fn solve(&self, theta: f64, k: f64) -> Result<InverseSolution<PressurePair>> {
        self.inverse(theta, k, 0.0)
    }

    fn theta_limit(&self) -> f64 {
        self.joint_limits().1
    }
}

impl InverseModel for Actuator<RationalFestoParams> {
    fn solve(&self, theta: f64, k: f64) -> Result<InverseSolution<PressurePair>> {
        self.inverse(theta, k)
    }

    fn theta_limit(&self) -> f64 {
        self.joint_limits().1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// N·m/rad
    pub stiffness: f64,
    /// rad
    pub theta: f64,
    pub solution: InverseSolution<PressurePair>,
}

pub type SweepTable = Vec<SweepRow>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

pub fn sweep_inverse<M: InverseModel>(
    model: &M,
    stiffness: Grid,
    theta: Grid,
) -> Result<SweepTable> {
    sweep_inverse_with(model, stiffness, theta, Execution::default())
}

pub fn sweep_inverse_with<M: InverseModel>(
    model: &M,
    stiffness: Grid,
    theta: Grid,
    execution: Execution,
) -> Result<SweepTable> {
    let ks = stiffness.values();
    let thetas = theta.values();
    if ks.is_empty() || thetas.is_empty() {
        return Err(Error::Empty("grid"));
    }
    let limit = model.theta_limit();
    for &th in [thetas[0], thetas[thetas.len() - 1]].iter() {
        if th.abs() > limit * (1.0 + 1e-9) {
            return Err(Error::JointOutOfRange {
                theta: th,
                theta_max: limit,
            });
        }
    }
    let points: Vec<(f64, f64)> = ks
        .iter()
        .flat_map(|&k| thetas.iter().map(move |&th| (k, th)))
        .collect();
    let solve = |&(k, th): &(f64, f64)| -> Result<SweepRow> {
        Ok(SweepRow {
            stiffness: k,
            theta: th,
            solution: model.solve(th, k)?,
        })
    };
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => points.par_iter().map(solve).collect(),
        _ => points.iter().map(solve).collect(),
    }
}
