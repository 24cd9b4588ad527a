use super::{
    check_box, Actuator, ActuatorConfig, Feasibility, InverseSolution, PressurePair,
    TorqueStiffness,
};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::MuscleGeometry;

impl Actuator<MuscleGeometry> {
    pub fn new_mckibben(muscle: MuscleGeometry, config: ActuatorConfig) -> Result<Self> {
        if config.eps0 >= muscle.eps_max() {
            return Err(Error::Domain(format!(
                "initial contraction {} must stay below εmax = {}",
                config.eps0,
                muscle.eps_max()
            )));
        }
        Ok(Self { muscle, config })
    }

    /// Closed-form torque and stiffness.
    pub fn direct(&self, pp: PressurePair, theta: f64) -> Result<TorqueStiffness> {
        check_box(&self.config, &pp)?;
        self.check_angle(theta)?;
        Ok(self.evaluate(pp, theta))
    }

    fn evaluate(&self, pp: PressurePair, theta: f64) -> TorqueStiffness {
        let g = &self.muscle;
        let r = self.config.pulley_radius;
        let one = 1.0 - self.config.eps0;
        let x = self.stroke(theta);
        let (diff, sum) = (pp.difference(), pp.sum());
        let torque = g.section()
            * r
            * ((g.a() * (one * one + x * x) - g.b()) * diff - 2.0 * g.a() * one * x * sum);
        let stiffness = 2.0 * g.a() * g.section() * r * r / g.l0() * (one * sum - x * diff);
        TorqueStiffness { torque, stiffness }
    }

    /// `a((1 − ε0)² − x²) − b`; the difference equation is singular where it vanishes.
    fn difference_gain(&self, theta: f64) -> f64 {
        let g = &self.muscle;
        let one = 1.0 - self.config.eps0;
        let x = self.stroke(theta);
        g.a() * (one * one - x * x) - g.b()
    }

    /// Pressures holding torque `torque` at angle `theta` with stiffness `k`.
    pub fn inverse(
        &self,
        theta: f64,
        k: f64,
        torque: f64,
    ) -> Result<InverseSolution<PressurePair>> {
        ensure_finite(k, "stiffness")?;
        ensure_finite(torque, "torque")?;
        self.check_angle(theta)?;
        let g = &self.muscle;
        let c = &self.config;
        let r = c.pulley_radius;
        let f = self.difference_gain(theta);
        if f.abs() <= 1e-12 * g.a() {
            return Err(Error::Degenerate(format!(
                "difference gain vanishes at θ = {theta} rad"
            )));
        }
        let diff = (torque + k * theta) / (g.section() * r * f);
        let gain = 2.0 * g.a() * g.section() * r * r * (1.0 - c.eps0) / g.l0();
        let sum =
            (k + 2.0 * g.a() * r * r * theta / (g.l0() * g.l0() * f) * (torque + k * theta)) / gain;
        let pp = PressurePair::from_sum_difference(sum, diff);
        let check = self.evaluate(pp, theta);
        let (e1, e2) = self.contraction_ratios(theta)?;
        let eps_ok = e1.max(e2) <= g.eps_max() + 1e-12;
        let feasible = sum > 0.0 && eps_ok && c.in_box(pp.p1) && c.in_box(pp.p2);
        Ok(InverseSolution {
            command: Some(pp),
            feasibility: if feasible {
                Feasibility::Feasible
            } else {
                Feasibility::ClippedInfeasible
            },
            torque_residual: (check.torque - torque).abs(),
            stiffness_residual: (check.stiffness - k).abs(),
        })
    }
}
