//! Closed-form real roots of monic cubics `x³ + a2 x² + a1 x + a0 = 0`.
//!
//! The cubic is depressed with `y = x + a2/3` into `y³ + p y + q = 0` and
//! classified by `D = q²/4 + p³/27`: one real root through Cardano's
//! cube roots when `D > 0`, three through the trigonometric form when
//! `D < 0`, and the repeated-root formulas when `D` is zero up to rounding.

use std::f64::consts::PI;

use crate::error::{ensure_finite, Result};

/// Multiple of the rounding-error bound on `D` (and on `p` for the triple
/// root) below which the cubic is treated as having a repeated root.
const MULTIPLE_ROOT_TOL: f64 = 1e3 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl CubicCoefficients {
    pub fn new(a2: f64, a1: f64, a0: f64) -> Self {
        Self { a2, a1, a0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((x + self.a2) * x + self.a1) * x + self.a0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * x + 2.0 * self.a2) * x + self.a1
    }

    /// `max(1, |a0|, |a1|, |a2|)`, the scale of the residual bound.
    pub fn scale(&self) -> f64 {
        1f64.max(self.a0.abs())
            .max(self.a1.abs())
            .max(self.a2.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    /// `D > 0`
    OneReal,
    /// `D < 0`
    ThreeReal,
    /// `D ≈ 0`: a double or triple root.
    Multiple,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicRoots {
    /// Distinct real roots in ascending order.
    pub roots: Vec<f64>,
    pub discriminant: f64,
    pub branch: RootBranch,
}

fn newton_polish(c: &CubicCoefficients, x: f64) -> f64 {
    let f = c.eval(x);
    let df = c.derivative(x);
    if f == 0.0 || df == 0.0 || !df.is_finite() {
        return x;
    }
    let next = x - f / df;
    // keep the step only when it helps; near a multiple root it may not
    if next.is_finite() && c.eval(next).abs() <= f.abs() {
        next
    } else {
        x
    }
}

pub fn solve_cubic(c: CubicCoefficients) -> Result<CubicRoots> {
    let a2 = ensure_finite(c.a2, "cubic coefficient a2")?;
    let a1 = ensure_finite(c.a1, "cubic coefficient a1")?;
    let a0 = ensure_finite(c.a0, "cubic coefficient a0")?;

    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = a0 - a1 * a2 / 3.0 + 2.0 * a2 * a2 * a2 / 27.0;
    let d = q * q / 4.0 + p * p * p / 27.0;

    // p and q carry absolute errors of order eps·s² and eps·s³, with s the
    // magnitude of the roots; propagate them into D.
    let s = (a2.abs() / 3.0).max(a1.abs().sqrt()).max(a0.abs().cbrt());
    let tol = MULTIPLE_ROOT_TOL
        * (q.abs() * s.powi(3) / 2.0 + p * p * s * s / 9.0 + q * q / 4.0 + p.abs().powi(3) / 27.0);
    let (branch, mut roots) = if d.abs() <= tol {
        let roots = if p.abs() <= MULTIPLE_ROOT_TOL * s * s {
            // triple root; q is then zero up to rounding as well
            vec![-shift - q.cbrt()]
        } else {
            vec![3.0 * q / p - shift, -1.5 * q / p - shift]
        };
        (RootBranch::Multiple, roots)
    } else if d > 0.0 {
        // Cardano's two cube roots multiply to −p/3; take the larger one
        // directly and derive the other from it to avoid cancellation.
        let sd = d.sqrt();
        let u = (-q / 2.0 - q.signum() * sd).cbrt();
        let y = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        (RootBranch::OneReal, vec![y - shift])
    } else {
        let r = (-p * p * p / 27.0).sqrt();
        let t = (-q / (2.0 * r)).clamp(-1.0, 1.0).acos();
        let m = 2.0 * (-p / 3.0).sqrt();
        let roots = (0..3)
            .map(|k| m * (t / 3.0 + 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect();
        (RootBranch::ThreeReal, roots)
    };

    for x in roots.iter_mut() {
        *x = newton_polish(&c, *x);
    }
    roots.sort_by(f64::total_cmp);
    if branch == RootBranch::Multiple {
        roots.dedup();
    }
    Ok(CubicRoots {
        roots,
        discriminant: d,
        branch,
    })
}
