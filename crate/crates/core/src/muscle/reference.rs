//! Empirical force models from the literature, kept for comparison and residual reports.
//! Coefficients are supplied by the user in whatever pressure unit they were
//! identified with; [`ReferenceModel::pressure_unit`] maps pascals onto it.

use super::{check_pressure, StaticMuscle};
use crate::error::{ensure_finite, Error, Result};

/// Below this contraction the `ε^(2/3)` term makes stiffness unbounded.
pub const HILDEBRANDT_MIN_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceModelSpec {
    /// `(c0 + c1 ε + c2 ε²) P − (d0 + d1 ε + d2 ε² + d3 ε³ + d4 ε^(2/3))`
    Hildebrandt { c: [f64; 3], d: [f64; 5] },
    /// `(c1 e^(c6 ε) + c2 ε + c3) P − (c4 e^(c6 ε) − c5)`; `c[0]` is c1.
    Sarosi { c: [f64; 6] },
    /// `(c3 P² + c2 P ls + c1 ls² + c0) ls` with stretched length `ls = l − min_length` in m.
    Wickramatunge { c: [f64; 4], min_length: f64 },
}

fn fixed<const N: usize>(v: &[f64], what: &str) -> Result<[f64; N]> {
    let arr: [f64; N] = v
        .try_into()
        .map_err(|_| Error::Domain(format!("{what} needs {N} coefficients, got {}", v.len())))?;
    for &x in &arr {
        ensure_finite(x, "reference-model coefficient")?;
    }
    Ok(arr)
}

impl ReferenceModelSpec {
    pub fn hildebrandt(c: &[f64], d: &[f64]) -> Result<Self> {
        Ok(Self::Hildebrandt {
            c: fixed(c, "Hildebrandt f1")?,
            d: fixed(d, "Hildebrandt f2")?,
        })
    }

    pub fn sarosi(c: &[f64]) -> Result<Self> {
        Ok(Self::Sarosi {
            c: fixed(c, "Sarosi")?,
        })
    }

    pub fn wickramatunge(c: &[f64], min_length: f64) -> Result<Self> {
        ensure_finite(min_length, "minimum length")?;
        Ok(Self::Wickramatunge {
            c: fixed(c, "Wickramatunge")?,
            min_length,
        })
    }

    /// Evaluates in model units. `x` is ε, or the stretched length for Wickramatunge.
    pub fn evaluate(&self, x: f64, p: f64) -> f64 {
        match *self {
            Self::Hildebrandt { c, d } => {
                let f1 = c[0] + x * (c[1] + x * c[2]);
                let f2 = d[0] + x * (d[1] + x * (d[2] + x * d[3])) + d[4] * x.cbrt().powi(2);
                f1 * p - f2
            }
            Self::Sarosi { c } => {
                let ex = (c[5] * x).exp();
                (c[0] * ex + c[1] * x + c[2]) * p - (c[3] * ex - c[4])
            }
            Self::Wickramatunge { c, .. } => {
                (c[3] * p * p + c[2] * p * x + c[1] * x * x + c[0]) * x
            }
        }
    }

    /// `∂F/∂x` in model units.
    pub fn slope(&self, x: f64, p: f64) -> f64 {
        match *self {
            Self::Hildebrandt { c, d } => {
                let df1 = c[1] + 2.0 * c[2] * x;
                let df2 = d[1] + x * (2.0 * d[2] + 3.0 * d[3] * x) + d[4] * 2.0 / (3.0 * x.cbrt());
                df1 * p - df2
            }
            Self::Sarosi { c } => {
                let ex = (c[5] * x).exp();
                (c[0] * c[5] * ex + c[1]) * p - c[3] * c[5] * ex
            }
            Self::Wickramatunge { c, .. } => {
                c[3] * p * p + 2.0 * c[2] * p * x + 3.0 * c[1] * x * x + c[0]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceModel {
    pub spec: ReferenceModelSpec,
    /// Rest length in m, used for ε ↔ length conversion and stiffness.
    pub rest_length: f64,
    /// Pascals per coefficient pressure unit (1e5 when coefficients were fitted in bar).
    pub pressure_unit: f64,
}

impl ReferenceModel {
    pub fn new(spec: ReferenceModelSpec, rest_length: f64, pressure_unit: f64) -> Result<Self> {
        ensure_finite(rest_length, "rest length")?;
        ensure_finite(pressure_unit, "pressure unit")?;
        if rest_length <= 0.0 || pressure_unit <= 0.0 {
            return Err(Error::Domain(
                "rest length and pressure unit must be positive".into(),
            ));
        }
        Ok(Self {
            spec,
            rest_length,
            pressure_unit,
        })
    }

    fn model_input(&self, eps: f64) -> Result<f64> {
        ensure_finite(eps, "contraction ratio")?;
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::ContractionOutOfRange { eps, eps_max: 1.0 });
        }
        match self.spec {
            ReferenceModelSpec::Wickramatunge { min_length, .. } => {
                let ls = self.rest_length * (1.0 - eps) - min_length;
                if ls < 0.0 {
                    return Err(Error::Domain(format!(
                        "stretched length {ls} m is negative at ε = {eps}"
                    )));
                }
                Ok(ls)
            }
            _ => Ok(eps),
        }
    }
}

impl StaticMuscle for ReferenceModel {
    fn force(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        let x = self.model_input(eps)?;
        Ok(self.spec.evaluate(x, p / self.pressure_unit))
    }

    fn stiffness(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        let x = self.model_input(eps)?;
        let pm = p / self.pressure_unit;
        match self.spec {
            // l_s grows with l, so ∂F/∂l = ∂F/∂l_s directly
            ReferenceModelSpec::Wickramatunge { .. } => Ok(self.spec.slope(x, pm)),
            ReferenceModelSpec::Hildebrandt { .. } if eps < HILDEBRANDT_MIN_EPS => {
                Err(Error::Domain(format!(
                    "Hildebrandt stiffness is unbounded near zero contraction (ε = {eps} < {HILDEBRANDT_MIN_EPS})"
                )))
            }
            _ => Ok(-self.spec.slope(x, pm) / self.rest_length),
        }
    }

    fn max_contraction(&self, _p: f64) -> Result<Option<f64>> {
        Ok(None)
    }

    fn rest_length(&self) -> f64 {
        self.rest_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_coefficients() {
        let s = ReferenceModelSpec::sarosi(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for eps in [0.0, 0.1, 0.3] {
            assert_eq!(s.evaluate(eps, 3.5), 3.5);
        }
        let h = ReferenceModelSpec::hildebrandt(&[2.0, 1.0, -1.0], &[0.0; 5]).unwrap();
        let eps: f64 = 0.2;
        assert!((h.evaluate(eps, 4.0) - (2.0 + 0.2 - 0.04) * 4.0).abs() < 1e-14);
        let w = ReferenceModelSpec::wickramatunge(&[0.0, 0.0, 0.0, 5.0], 0.3).unwrap();
        assert!((w.evaluate(0.1, 2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn coefficient_counts_checked() {
        assert!(ReferenceModelSpec::sarosi(&[1.0; 5]).is_err());
        assert!(ReferenceModelSpec::hildebrandt(&[1.0; 3], &[1.0; 4]).is_err());
        assert!(ReferenceModelSpec::wickramatunge(&[1.0; 5], 0.1).is_err());
    }

    #[test]
    fn wickramatunge_uses_stretched_length() {
        let spec = ReferenceModelSpec::wickramatunge(&[0.0, 0.0, 0.0, 5.0], 0.3).unwrap();
        let m = ReferenceModel::new(spec, 0.4, 1e5).unwrap();
        // ε = 0.0 → l = 0.4, l_s = 0.1
        assert!((m.force(0.0, 2e5).unwrap() - 2.0).abs() < 1e-12);
        // ε = 0.5 → l = 0.2 < min length
        assert!(m.force(0.5, 2e5).is_err());
    }

    #[test]
    fn hildebrandt_stiffness_refused_near_zero() {
        let spec =
            ReferenceModelSpec::hildebrandt(&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let m = ReferenceModel::new(spec, 0.4, 1e5).unwrap();
        assert!(m.stiffness(1e-7, 3e5).is_err());
        assert!(m.stiffness(1e-3, 3e5).unwrap().is_finite());
    }
}
