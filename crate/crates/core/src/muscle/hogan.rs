use super::{check_contraction, StaticMuscle};
use crate::error::{ensure_finite, Error, Result};

/// Linear force-contraction model of an activated skeletal muscle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoganParams {
    /// Isometric force at full activation, N.
    pub f_max: f64,
    /// Contraction at which the force vanishes.
    pub eps_max: f64,
    /// Rest length, m. Only stiffness and actuator kinematics use it.
    pub rest_length: f64,
}

impl HoganParams {
    pub fn new(f_max: f64, eps_max: f64, rest_length: f64) -> Result<Self> {
        ensure_finite(f_max, "maximum force")?;
        ensure_finite(eps_max, "maximum contraction")?;
        ensure_finite(rest_length, "rest length")?;
        if f_max <= 0.0 {
            return Err(Error::Domain(format!(
                "maximum force {f_max} N must be positive"
            )));
        }
        if !(eps_max > 0.0 && eps_max < 1.0) {
            return Err(Error::Domain(format!(
                "maximum contraction {eps_max} outside (0, 1)"
            )));
        }
        if rest_length <= 0.0 {
            return Err(Error::Domain(format!(
                "rest length {rest_length} m must be positive"
            )));
        }
        Ok(Self {
            f_max,
            eps_max,
            rest_length,
        })
    }

    fn check_activation(u: f64) -> Result<()> {
        ensure_finite(u, "activation")?;
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("activation {u} outside [0, 1]")));
        }
        Ok(())
    }
}

impl StaticMuscle for HoganParams {
    fn force(&self, eps: f64, u: f64) -> Result<f64> {
        Self::check_activation(u)?;
        check_contraction(eps, self.eps_max)?;
        Ok(u * self.f_max * (1.0 - eps / self.eps_max))
    }

    fn stiffness(&self, eps: f64, u: f64) -> Result<f64> {
        Self::check_activation(u)?;
        check_contraction(eps, self.eps_max)?;
        Ok(u * self.f_max / (self.rest_length * self.eps_max))
    }

    fn max_contraction(&self, _u: f64) -> Result<Option<f64>> {
        Ok(Some(self.eps_max))
    }

    fn rest_length(&self) -> f64 {
        self.rest_length
    }
}
