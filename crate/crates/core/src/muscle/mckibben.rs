//! Cylindrical McKibben muscle and its pressure-dependent corrections.

use super::{check_contraction, check_pressure, StaticMuscle};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::MuscleGeometry;

impl StaticMuscle for MuscleGeometry {
    fn force(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        check_contraction(eps, self.eps_max())?;
        let one = 1.0 - eps;
        Ok(self.section() * p * (self.a() * one * one - self.b()))
    }

    fn stiffness(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        check_contraction(eps, self.eps_max())?;
        Ok(2.0 * self.a() * self.section() * p * (1.0 - eps) / self.l0())
    }

    fn max_contraction(&self, _p: f64) -> Result<Option<f64>> {
        Ok(Some(self.eps_max()))
    }

    fn rest_length(&self) -> f64 {
        self.l0()
    }
}

/// Pressure-indexed contraction scaling `k(P)`, interpolated linearly
/// between anchors and held constant beyond the first and last anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct KTable {
    points: Vec<(f64, f64)>,
}

impl KTable {
    /// `points` are `(pressure in Pa, k)` pairs sorted by strictly increasing pressure.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("k table"));
        }
        for &(p, k) in &points {
            ensure_finite(p, "k-table pressure")?;
            ensure_finite(k, "k-table value")?;
            if k <= 0.0 {
                return Err(Error::Domain(format!("k({p} Pa) = {k} must be positive")));
            }
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Domain(
                "k table pressures must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn k(&self, p: f64) -> f64 {
        let pts = &self.points;
        let (first, last) = (pts[0], pts[pts.len() - 1]);
        if p <= first.0 {
            return first.1;
        }
        if p >= last.0 {
            return last.1;
        }
        let i = pts.partition_point(|&(q, _)| q <= p);
        let (p0, k0) = pts[i - 1];
        let (p1, k1) = pts[i];
        k0 + (k1 - k0) * (p - p0) / (p1 - p0)
    }
}

/// McKibben model whose maximum contraction depends on pressure through `k(P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedMcKibbenParams {
    pub geometry: MuscleGeometry,
    pub k_table: KTable,
}

impl ModifiedMcKibbenParams {
    pub fn new(geometry: MuscleGeometry, k_table: KTable) -> Self {
        Self { geometry, k_table }
    }

    fn eps_max_at(&self, p: f64) -> f64 {
        self.geometry.eps_max() / self.k_table.k(p)
    }
}

impl StaticMuscle for ModifiedMcKibbenParams {
    fn force(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        check_contraction(eps, self.eps_max_at(p))?;
        let g = &self.geometry;
        let one = 1.0 - self.k_table.k(p) * eps;
        Ok(g.section() * p * (g.a() * one * one - g.b()))
    }

    fn stiffness(&self, eps: f64, p: f64) -> Result<f64> {
        check_pressure(p)?;
        check_contraction(eps, self.eps_max_at(p))?;
        let g = &self.geometry;
        let k = self.k_table.k(p);
        Ok(2.0 * g.a() * g.section() * p * k * (1.0 - k * eps) / g.l0())
    }

    fn max_contraction(&self, p: f64) -> Result<Option<f64>> {
        check_pressure(p)?;
        Ok(Some(self.eps_max_at(p)))
    }

    fn rest_length(&self) -> f64 {
        self.geometry.l0()
    }
}

/// Modified McKibben model scaled by a friction/thickness factor `q ∈ (0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AndrikopoulosParams {
    pub base: ModifiedMcKibbenParams,
    pub q: f64,
}

impl AndrikopoulosParams {
    pub fn new(geometry: MuscleGeometry, q: f64, k_table: KTable) -> Result<Self> {
        ensure_finite(q, "q")?;
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain(format!("q = {q} outside (0, 1]")));
        }
        Ok(Self {
            base: ModifiedMcKibbenParams::new(geometry, k_table),
            q,
        })
    }
}

impl StaticMuscle for AndrikopoulosParams {
    fn force(&self, eps: f64, p: f64) -> Result<f64> {
        Ok(self.q * self.base.force(eps, p)?)
    }

    fn stiffness(&self, eps: f64, p: f64) -> Result<f64> {
        Ok(self.q * self.base.stiffness(eps, p)?)
    }

    fn max_contraction(&self, p: f64) -> Result<Option<f64>> {
        self.base.max_contraction(p)
    }

    fn rest_length(&self) -> f64 {
        self.base.rest_length()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{bar, cm, deg};

    fn nominal_mckibben() -> MuscleGeometry {
        MuscleGeometry::new(cm(1.0), cm(40.0), deg(23.5)).unwrap()
    }

    fn festo_geometry() -> MuscleGeometry {
        MuscleGeometry::new(cm(1.09), cm(40.0), deg(25.5)).unwrap()
    }

    #[test]
    fn theoretical_force_examples() {
        let g = nominal_mckibben();
        assert!((g.force(0.0, bar(5.0)).unwrap() - 1_504.595_348_732_853_7).abs() < 1e-9);
        assert!((g.force(0.185, bar(3.0)).unwrap() - 400.603_184_044_355_6).abs() < 1e-9);
        assert!(g.force(g.eps_max(), bar(4.0)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn theoretical_domain_error_carries_eps_max() {
        let g = nominal_mckibben();
        match g.force(0.5, bar(3.0)) {
            Err(Error::ContractionOutOfRange { eps_max, .. }) => {
                assert!((eps_max - g.eps_max()).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
        assert!(g.force(0.1, -1.0).is_err());
    }

    #[test]
    fn k_table_interpolates_and_clamps() {
        let t = KTable::new(vec![(bar(3.0), 1.6), (bar(5.0), 1.2)]).unwrap();
        assert_eq!(t.k(bar(1.0)), 1.6);
        assert_eq!(t.k(bar(3.0)), 1.6);
        assert!((t.k(bar(4.0)) - 1.4).abs() < 1e-15);
        assert_eq!(t.k(bar(5.0)), 1.2);
        assert_eq!(t.k(bar(6.0)), 1.2);
        assert!(KTable::new(vec![(bar(3.0), 1.0), (bar(3.0), 1.1)]).is_err());
        assert!(KTable::new(vec![(bar(3.0), 0.0)]).is_err());
        assert!(KTable::new(vec![]).is_err());
    }

    #[test]
    fn modified_model_vanishes_at_measured_eps_max() {
        let g = festo_geometry();
        let k5 = g.eps_max() / 0.275;
        assert!((k5 - 1.310_316_933_931_337_7).abs() < 1e-12);
        let m = ModifiedMcKibbenParams::new(g, KTable::new(vec![(bar(5.0), k5)]).unwrap());
        assert!(m.force(0.275, bar(5.0)).unwrap().abs() < 1e-9);
        // the k factor only multiplies ε
        let f0 = m.force(0.0, bar(5.0)).unwrap();
        assert!((f0 - g.force(0.0, bar(5.0)).unwrap()).abs() < 1e-12);
        assert!(m.force(0.28, bar(5.0)).is_err());
    }

    #[test]
    fn andrikopoulos_scales_by_q() {
        let g = festo_geometry();
        let table = KTable::new(vec![(bar(3.0), 1.6), (bar(5.0), 1.31)]).unwrap();
        let base = ModifiedMcKibbenParams::new(g, table.clone());
        let one = AndrikopoulosParams::new(g, 1.0, table.clone()).unwrap();
        let half = AndrikopoulosParams::new(g, 0.5, table.clone()).unwrap();
        let f = base.force(0.1, bar(4.0)).unwrap();
        assert_eq!(one.force(0.1, bar(4.0)).unwrap(), f);
        assert!((half.force(0.1, bar(4.0)).unwrap() - 0.5 * f).abs() < 1e-12);

        let q9 = AndrikopoulosParams::new(g, 0.9, table).unwrap();
        assert!((q9.force(0.0, bar(5.0)).unwrap() - 1_308.603_375_698_891_7).abs() < 1e-8);
        assert!(AndrikopoulosParams::new(g, 0.0, KTable::new(vec![(1.0, 1.0)]).unwrap()).is_err());
    }
}
