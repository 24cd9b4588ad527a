//! Force models built on the McKibben isometric term,
//! `F = π r0² [(a − b) P − ε f(ε, P)]`.

use super::{check_contraction, check_pressure, StaticMuscle};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::MuscleGeometry;

/// Relative distance to the pole `P = −d` below which evaluation is refused.
const POLE_TOL: f64 = 1e-9;

/// Rational shape term `f(P) = (cP + e) / (P + d)`, all in SI
/// (`c` and `d` in Pa, `e` in Pa²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalFestoParams {
    pub geometry: MuscleGeometry,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl RationalFestoParams {
    pub fn new(geometry: MuscleGeometry, c: f64, d: f64, e: f64) -> Result<Self> {
        ensure_finite(c, "c")?;
        ensure_finite(d, "d")?;
        ensure_finite(e, "e")?;
        Ok(Self { geometry, c, d, e })
    }

    /// `P + d`, refusing pressures at the pole.
    pub fn shifted(&self, p: f64) -> Result<f64> {
        let u = p + self.d;
        if u.abs() <= POLE_TOL * (p.abs() + self.d.abs()).max(1.0) {
            return Err(Error::Pole {
                pressure: p,
                d: self.d,
            });
        }
        Ok(u)
    }

    /// `(cP + e) / (P + d)`, in Pa.
    pub fn shape(&self, p: f64) -> Result<f64> {
        Ok((self.c * p + self.e) / self.shifted(p)?)
    }

    /// `(a − b) P (P + d) / (cP + e)`.
    pub fn eps_max_at(&self, p: f64) -> Result<f64> {
        let g = self.shape(p)?;
        if g <= 0.0 {
            return Err(Error::Domain(format!(
                "(cP+e)/(P+d) = {g} is not positive at P = {p} Pa; force would not decrease with contraction"
            )));
        }
        Ok(self.geometry.a_minus_b() * p / g)
    }

    /// Checks that the pole lies outside `[p_min, p_max]` and that the shape
    /// term stays positive over the whole range.
    pub fn validate_pressure_box(&self, p_min: f64, p_max: f64) -> Result<()> {
        let pole = -self.d;
        if pole >= p_min && pole <= p_max {
            return Err(Error::Pole {
                pressure: pole,
                d: self.d,
            });
        }
        // g is monotone between poles, so the endpoints decide its sign.
        for p in [p_min, p_max] {
            let g = self.shape(p)?;
            if g <= 0.0 {
                return Err(Error::Domain(format!(
                    "(cP+e)/(P+d) = {g} is not positive at P = {p} Pa"
                )));
            }
        }
        Ok(())
    }
}

impl StaticMuscle for RationalFestoParams {
    fn force(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        check_contraction(eps, self.eps_max_at(p)?)?;
        let g = &self.geometry;
        Ok(g.section() * (g.a_minus_b() * p - eps * self.shape(p)?))
    }

    /// Independent of ε at fixed pressure.
    fn stiffness(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        check_contraction(eps, self.eps_max_at(p)?)?;
        let g = &self.geometry;
        Ok(g.section() / g.l0() * self.shape(p)?)
    }

    fn max_contraction(&self, p: f64) -> Result<Option<f64>> {
        check_pressure(p)?;
        Ok(Some(self.eps_max_at(p)?))
    }

    fn rest_length(&self) -> f64 {
        self.geometry.l0()
    }
}

/// Polynomial shape term `f(ε) = a0 + a1 ε + a2 ε² + …`, coefficients in Pa.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFestoParams {
    pub geometry: MuscleGeometry,
    coeffs: Vec<f64>,
}

impl PolynomialFestoParams {
    pub fn new(geometry: MuscleGeometry, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty("polynomial coefficients"));
        }
        for &c in &coeffs {
            ensure_finite(c, "polynomial coefficient")?;
        }
        Ok(Self { geometry, coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `f(ε)` by Horner's rule.
    pub fn shape(&self, eps: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * eps + c)
    }

    /// `f'(ε)`.
    pub fn shape_slope(&self, eps: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * eps + i as f64 * c)
    }

    /// `d/dε [ε f(ε)] = Σ (i+1) a_i εⁱ`.
    fn product_slope(&self, eps: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * eps + (i + 1) as f64 * c)
    }

    fn check(eps: f64, p: f64) -> Result<()> {
        check_pressure(p)?;
        ensure_finite(eps, "contraction ratio")?;
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::ContractionOutOfRange { eps, eps_max: 1.0 });
        }
        Ok(())
    }

    /// Unchecked force; may be negative past the zero-force contraction.
    pub fn force_unchecked(&self, eps: f64, p: f64) -> f64 {
        let g = &self.geometry;
        g.section() * (g.a_minus_b() * p - eps * self.shape(eps))
    }
}

impl StaticMuscle for PolynomialFestoParams {
    fn force(&self, eps: f64, p: f64) -> Result<f64> {
        Self::check(eps, p)?;
        Ok(self.force_unchecked(eps, p))
    }

    fn stiffness(&self, eps: f64, p: f64) -> Result<f64> {
        Self::check(eps, p)?;
        let g = &self.geometry;
        Ok(g.section() / g.l0() * self.product_slope(eps))
    }

    /// First zero of the force on `(0, 1)`, located by scan and bisection.
    fn max_contraction(&self, p: f64) -> Result<Option<f64>> {
        check_pressure(p)?;
        if p == 0.0 {
            return Ok(Some(0.0));
        }
        const STEPS: usize = 4000;
        let f = |x: f64| self.force_unchecked(x, p);
        let mut lo = 0.0;
        let mut f_lo = f(lo);
        for i in 1..STEPS {
            let hi = i as f64 / STEPS as f64;
            let f_hi = f(hi);
            if f_hi == 0.0 {
                return Ok(Some(hi));
            }
            if f_lo.signum() != f_hi.signum() {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    if f(m).signum() == f_lo.signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                return Ok(Some(0.5 * (a + b)));
            }
            lo = hi;
            f_lo = f_hi;
        }
        Ok(None)
    }

    fn rest_length(&self) -> f64 {
        self.geometry.l0()
    }
}
