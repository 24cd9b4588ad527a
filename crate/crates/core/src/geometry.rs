//! Braided-sleeve geometry shared by every McKibben-type muscle model.

use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};

/// Braid angle at which `a == b` and the theoretical muscle can no longer contract.
pub const MAGIC_ANGLE_RAD: f64 = 0.955_316_618_124_509_3; // atan(sqrt(2))

/// Dimensionless braid constants of a cylindrical McKibben muscle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraidConstants {
    /// `3 / tan²(α0)`
    pub a: f64,
    /// `1 / sin²(α0)`
    pub b: f64,
    /// `1 − sqrt(b/a)`; zero or negative at and beyond the magic angle.
    pub eps_max: f64,
}

/// Computes the braid constants for an initial braid angle in radians.
pub fn derive_braid_constants(alpha0: f64) -> Result<BraidConstants> {
    ensure_finite(alpha0, "braid angle")?;
    if !(alpha0 > 0.0 && alpha0 < PI / 2.0) {
        return Err(Error::Domain(format!(
            "braid angle {:.6}° outside (0°, 90°)",
            alpha0.to_degrees()
        )));
    }
    let (s, c) = alpha0.sin_cos();
    let a = 3.0 * c * c / (s * s);
    let b = 1.0 / (s * s);
    Ok(BraidConstants {
        a,
        b,
        eps_max: 1.0 - (b / a).sqrt(),
    })
}

/// Initial radius, active length and braid angle of a muscle, with the braid
/// constants cached at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuscleGeometry {
    r0: f64,
    l0: f64,
    alpha0: f64,
    braid: BraidConstants,
}

impl MuscleGeometry {
    /// `r0` and `l0` in meters, `alpha0` in radians.
    pub fn new(r0: f64, l0: f64, alpha0: f64) -> Result<Self> {
        ensure_finite(r0, "initial radius")?;
        ensure_finite(l0, "initial length")?;
        if r0 <= 0.0 {
            return Err(Error::Domain(format!(
                "initial radius {r0} m must be positive"
            )));
        }
        if l0 <= 0.0 {
            return Err(Error::Domain(format!(
                "initial length {l0} m must be positive"
            )));
        }
        let braid = derive_braid_constants(alpha0)?;
        Ok(Self {
            r0,
            l0,
            alpha0,
            braid,
        })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn braid(&self) -> BraidConstants {
        self.braid
    }

    pub fn a(&self) -> f64 {
        self.braid.a
    }

    pub fn b(&self) -> f64 {
        self.braid.b
    }

    /// `a − b`, the zero-contraction force per unit pressure and section.
    pub fn a_minus_b(&self) -> f64 {
        self.braid.a - self.braid.b
    }

    pub fn eps_max(&self) -> f64 {
        self.braid.eps_max
    }

    /// Cross-section `π r0²` in m².
    pub fn section(&self) -> f64 {
        PI * self.r0 * self.r0
    }

    /// Isometric (ε = 0) force at pressure `p` in Pa.
    pub fn isometric_force(&self, p: f64) -> f64 {
        self.section() * p * self.a_minus_b()
    }

    pub fn with_alpha0(&self, alpha0: f64) -> Result<Self> {
        Self::new(self.r0, self.l0, alpha0)
    }
}
