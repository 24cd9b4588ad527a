use super::{Activation, Actuator, Feasibility, InverseSolution, TorqueStiffness};
use crate::error::{ensure_finite, Error, Result};
use crate::muscle::HoganParams;

impl Actuator<HoganParams> {
    pub fn new_hogan(muscle: HoganParams, config: super::ActuatorConfig) -> Result<Self> {
        if config.eps0 >= muscle.eps_max {
            return Err(Error::Domain(format!(
                "initial contraction {} must stay below εmax = {}",
                config.eps0, muscle.eps_max
            )));
        }
        Ok(Self { muscle, config })
    }

    /// `R² F_max / (l0 εmax)`: stiffness per unit of total activation.
    fn stiffness_gain(&self) -> f64 {
        let r = self.config.pulley_radius;
        r * r * self.muscle.f_max / (self.muscle.rest_length * self.muscle.eps_max)
    }

    /// `(1 − ε0/εmax) R F_max`: torque per unit of activation difference at θ = 0.
    fn torque_gain(&self) -> f64 {
        (1.0 - self.config.eps0 / self.muscle.eps_max)
            * self.config.pulley_radius
            * self.muscle.f_max
    }

    fn check_activation(act: &Activation) -> Result<()> {
        for u in [act.u1, act.u2] {
            ensure_finite(u, "activation")?;
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::Domain(format!("activation {u} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn direct(&self, act: Activation, theta: f64) -> Result<TorqueStiffness> {
        Self::check_activation(&act)?;
        self.check_angle(theta)?;
        let stiffness = self.stiffness_gain() * (act.u1 + act.u2);
        let torque = self.torque_gain() * (act.u1 - act.u2) - stiffness * theta;
        Ok(TorqueStiffness { torque, stiffness })
    }

    /// Angle at which the two muscle torques cancel.
    pub fn equilibrium(&self, act: Activation) -> Result<f64> {
        Self::check_activation(&act)?;
        let total = act.u1 + act.u2;
        if total <= 0.0 {
            return Err(Error::Degenerate(
                "equilibrium undefined with both muscles inactive".into(),
            ));
        }
        Ok(self.torque_gain() * (act.u1 - act.u2) / (self.stiffness_gain() * total))
    }

    /// Activations placing the equilibrium at `theta` with stiffness `k`.
    pub fn inverse(&self, theta: f64, k: f64) -> Result<InverseSolution<Activation>> {
        ensure_finite(k, "stiffness")?;
        self.check_angle(theta)?;
        let total = k / self.stiffness_gain();
        let difference = k * theta / self.torque_gain();
        let act = Activation::new(0.5 * (total + difference), 0.5 * (total - difference));
        let inside = |u: f64| (-1e-12..=1.0 + 1e-12).contains(&u);
        let feasible = total > 0.0 && inside(act.u1) && inside(act.u2);
        let stiffness = self.stiffness_gain() * (act.u1 + act.u2);
        let torque = self.torque_gain() * (act.u1 - act.u2) - stiffness * theta;
        Ok(InverseSolution {
            command: Some(act),
            feasibility: if feasible {
                Feasibility::Feasible
            } else {
                Feasibility::ClippedInfeasible
            },
            torque_residual: torque.abs(),
            stiffness_residual: (stiffness - k).abs(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actuator::ActuatorConfig;
    use crate::units::cm;

    fn actuator() -> Actuator<HoganParams> {
        let m = HoganParams::new(1500.0, 0.37, cm(40.0)).unwrap();
        Actuator::new_hogan(m, ActuatorConfig::with_defaults(cm(2.0), 0.185).unwrap()).unwrap()
    }

    /// Zero of T(θ) by bisection over the joint range.
    fn bisect_equilibrium(a: &Actuator<HoganParams>, act: Activation) -> f64 {
        let (mut lo, mut hi) = a.joint_limits();
        let t = |th: f64| a.direct(act, th).unwrap().torque;
        assert!(t(lo) * t(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if t(mid).signum() == t(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn stiffness_example() {
        let k = actuator()
            .direct(Activation::new(0.6, 0.4), 0.3)
            .unwrap()
            .stiffness;
        assert!((k - 4.054_054_054_054_054).abs() < 1e-12);
    }

    #[test]
    fn symmetric_activation_gives_zero_torque() {
        let a = actuator();
        assert_eq!(
            a.direct(Activation::new(0.5, 0.5), 0.0).unwrap().torque,
            0.0
        );
        assert_eq!(a.equilibrium(Activation::new(0.3, 0.3)).unwrap(), 0.0);
    }

    #[test]
    fn equilibrium_zeroes_torque_and_is_scale_invariant() {
        let a = actuator();
        let act = Activation::new(0.4, 0.1);
        let th = a.equilibrium(act).unwrap();
        assert!(a.direct(act, th).unwrap().torque.abs() < 1e-12);
        assert_eq!(a.equilibrium(Activation::new(0.8, 0.2)).unwrap(), th);
    }

    #[test]
    fn equilibrium_agrees_with_bisection() {
        let a = actuator();
        let act = Activation::new(0.8, 0.2);
        let th = a.equilibrium(act).unwrap();
        assert!((th - bisect_equilibrium(&a, act)).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_needs_activation() {
        assert!(actuator().equilibrium(Activation::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn stiffness_independent_of_angle() {
        let a = actuator();
        let act = Activation::new(0.7, 0.2);
        let k0 = a.direct(act, 0.0).unwrap().stiffness;
        for th in [-2.0, -0.5, 0.7, 3.0] {
            assert_eq!(a.direct(act, th).unwrap().stiffness, k0);
        }
    }

    #[test]
    fn inverse_examples() {
        let a = actuator();
        let s = a.inverse(0.0, 3.0).unwrap();
        let act = s.command.unwrap();
        let expected = 3.0 * 0.4 * 0.37 / (2.0 * 0.0004 * 1500.0);
        assert!((act.u1 - expected).abs() < 1e-15 && act.u1 == act.u2);
        assert!(s.is_feasible());
        // u1 + u2 = 2 caps the stiffness at ≈ 8.108 N·m/rad
        let s = a.inverse(0.0, 8.2).unwrap();
        assert_eq!(s.feasibility, Feasibility::ClippedInfeasible);
    }

    #[test]
    fn inverse_matches_composed_muscles() {
        let a = actuator();
        for (u1, u2, th) in [(0.3, 0.6, 0.2), (0.9, 0.1, -1.0)] {
            let closed = a.direct(Activation::new(u1, u2), th).unwrap();
            let composed = a.compose(u1, u2, th).unwrap();
            assert!((closed.torque - composed.torque).abs() < 1e-10);
            assert!((closed.stiffness - composed.stiffness).abs() < 1e-12);
        }
    }
}
