//! Static contraction force and stiffness of single muscles.
//!
//! Every model maps a contraction ratio `ε = (l0 − l)/l0` and a drive (gauge
//! pressure in Pa, or the normalized activation `u` for [`HoganParams`]) to a
//! contraction force in N. Stiffness is `∂F/∂l = −(1/l0) ∂F/∂ε` in N/m and is
//! positive for a taut muscle.

mod festo;
mod hogan;
mod mckibben;
mod reference;

pub use festo::{PolynomialFestoParams, RationalFestoParams};
pub use hogan::HoganParams;
pub use mckibben::{AndrikopoulosParams, KTable, ModifiedMcKibbenParams};
pub use reference::{ReferenceModel, ReferenceModelSpec, HILDEBRANDT_MIN_EPS};

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::MuscleGeometry;

/// Slack allowed on domain boundaries so that `F(εmax)` itself is evaluable.
pub(crate) const CONTRACTION_TOL: f64 = 1e-12;

pub(crate) fn check_contraction(eps: f64, eps_max: f64) -> Result<()> {
    ensure_finite(eps, "contraction ratio")?;
    if eps < -CONTRACTION_TOL || eps > eps_max + CONTRACTION_TOL {
        return Err(Error::ContractionOutOfRange { eps, eps_max });
    }
    Ok(())
}

pub(crate) fn check_pressure(p: f64) -> Result<()> {
    ensure_finite(p, "pressure")?;
    if p < 0.0 {
        return Err(Error::Domain(format!("pressure {p} Pa is negative")));
    }
    Ok(())
}

pub trait StaticMuscle {
    /// Contraction force in N.
    fn force(&self, eps: f64, drive: f64) -> Result<f64>;

    /// `∂F/∂l` in N/m.
    fn stiffness(&self, eps: f64, drive: f64) -> Result<f64>;

    /// Contraction at which the force vanishes, when the model defines one.
    fn max_contraction(&self, drive: f64) -> Result<Option<f64>>;

    fn rest_length(&self) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub enum MuscleModel {
    Hogan(HoganParams),
    TheoreticalMcKibben(MuscleGeometry),
    ModifiedMcKibben(ModifiedMcKibbenParams),
    Andrikopoulos(AndrikopoulosParams),
    RationalFesto(RationalFestoParams),
    PolynomialFesto(PolynomialFestoParams),
    Reference(ReferenceModel),
}

impl MuscleModel {
    fn inner(&self) -> &dyn StaticMuscle {
        match self {
            MuscleModel::Hogan(m) => m,
            MuscleModel::TheoreticalMcKibben(m) => m,
            MuscleModel::ModifiedMcKibben(m) => m,
            MuscleModel::Andrikopoulos(m) => m,
            MuscleModel::RationalFesto(m) => m,
            MuscleModel::PolynomialFesto(m) => m,
            MuscleModel::Reference(m) => m,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MuscleModel::Hogan(_) => "hogan",
            MuscleModel::TheoreticalMcKibben(_) => "mckibben",
            MuscleModel::ModifiedMcKibben(_) => "modified-mckibben",
            MuscleModel::Andrikopoulos(_) => "andrikopoulos",
            MuscleModel::RationalFesto(_) => "festo",
            MuscleModel::PolynomialFesto(_) => "polynomial",
            MuscleModel::Reference(r) => match r.spec {
                ReferenceModelSpec::Hildebrandt { .. } => "hildebrandt",
                ReferenceModelSpec::Sarosi { .. } => "sarosi",
                ReferenceModelSpec::Wickramatunge { .. } => "wickramatunge",
            },
        }
    }
}

impl StaticMuscle for MuscleModel {
    fn force(&self, eps: f64, drive: f64) -> Result<f64> {
        self.inner().force(eps, drive)
    }

    fn stiffness(&self, eps: f64, drive: f64) -> Result<f64> {
        self.inner().stiffness(eps, drive)
    }

    fn max_contraction(&self, drive: f64) -> Result<Option<f64>> {
        self.inner().max_contraction(drive)
    }

    fn rest_length(&self) -> f64 {
        self.inner().rest_length()
    }
}

macro_rules! from_variant {
    ($($ty:ty => $variant:ident),* $(,)?) => {
        $(impl From<$ty> for MuscleModel {
            fn from(m: $ty) -> Self {
                MuscleModel::$variant(m)
            }
        })*
    };
}

from_variant! {
    HoganParams => Hogan,
    MuscleGeometry => TheoreticalMcKibben,
    ModifiedMcKibbenParams => ModifiedMcKibben,
    AndrikopoulosParams => Andrikopoulos,
    RationalFestoParams => RationalFesto,
    PolynomialFestoParams => PolynomialFesto,
    ReferenceModel => Reference,
}
