//! Parameter identification from datasheet anchors and measured curves.

use std::f64::consts::PI;

use crate::dataset::ForceCurveDataset;
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::MuscleGeometry;
use crate::muscle::{
    KTable, MuscleModel, PolynomialFestoParams, RationalFestoParams, StaticMuscle,
};

/// Largest Vandermonde system accepted by [`fit_polynomial_coeffs`].
pub const MAX_POLY_ANCHORS: usize = 6;
/// 1-norm condition number beyond which the anchor system is reported singular.
pub const MAX_CONDITION: f64 = 1e13;
/// More slope sign changes than this on `[0, max εmax]` flags an oscillating fit.
pub const WANDERING_SLOPE_CHANGES: usize = 2;

/// Measured zero-force contraction at one pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionAnchor {
    /// Pa
    pub pressure: f64,
    pub eps_max: f64,
}

impl ContractionAnchor {
    pub fn new(pressure: f64, eps_max: f64) -> Result<Self> {
        ensure_finite(pressure, "anchor pressure")?;
        ensure_finite(eps_max, "anchor contraction")?;
        if pressure <= 0.0 {
            return Err(Error::Domain(format!(
                "anchor pressure {pressure} Pa must be positive"
            )));
        }
        if !(eps_max > 0.0 && eps_max < 1.0) {
            return Err(Error::Domain(format!(
                "anchor contraction {eps_max} outside (0, 1)"
            )));
        }
        Ok(Self { pressure, eps_max })
    }
}

/// Datasheet dimensions used to place the braid mid-wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryMeasurement {
    /// Inner tube radius, m.
    pub r_int: f64,
    /// Inner tube wall thickness, m.
    pub t0: f64,
}

/// Radius of the braid, assumed to sit in the middle of the tube wall.
pub fn estimate_r0(m: &GeometryMeasurement) -> Result<f64> {
    ensure_finite(m.r_int, "inner radius")?;
    ensure_finite(m.t0, "wall thickness")?;
    if m.r_int <= 0.0 || m.t0 < 0.0 {
        return Err(Error::Domain(format!(
            "inner radius {} m must be positive and wall thickness {} m non-negative",
            m.r_int, m.t0
        )));
    }
    Ok(m.r_int + m.t0 / 2.0)
}

/// Braid angle (rad) whose theoretical isometric force at pressure `p` equals `f_max`.
pub fn estimate_alpha0(f_max: f64, p: f64, r0: f64) -> Result<f64> {
    ensure_finite(f_max, "maximum force")?;
    ensure_finite(p, "pressure")?;
    ensure_finite(r0, "radius")?;
    if f_max <= 0.0 || p <= 0.0 || r0 <= 0.0 {
        return Err(Error::Domain(
            "maximum force, pressure and radius must be positive".into(),
        ));
    }
    // a − b = (2 − 3 sin²α0) / sin²α0
    let g = f_max / (PI * r0 * r0 * p);
    if g.is_nan() || g <= 0.0 {
        return Err(Error::Infeasible(format!(
            "normalized force {g} is not positive"
        )));
    }
    Ok((2.0 / (3.0 + g)).sqrt().asin())
}

/// Dense partial-pivot LU of a small square system. Returns the solution and
/// a 1-norm condition estimate computed from the explicit inverse.
fn solve_small(matrix: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = rhs.len();
    let norm1 = |m: &[Vec<f64>]| {
        (0..n)
            .map(|j| m.iter().map(|row| row[j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let a_norm = norm1(matrix);

    // augment with identity so the inverse comes out of the same elimination
    let mut aug: Vec<Vec<f64>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r.push(rhs[i]);
            r
        })
        .collect();
    let width = 2 * n + 1;

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .unwrap();
        if aug[pivot][col].abs() <= f64::EPSILON * a_norm {
            return Err(Error::Singular {
                condition: f64::INFINITY,
            });
        }
        aug.swap(col, pivot);
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = aug[row][col] / aug[col][col];
            if factor != 0.0 {
                let pivot_row = aug[col].clone();
                for (x, p) in aug[row][col..width].iter_mut().zip(&pivot_row[col..width]) {
                    *x -= factor * p;
                }
            }
        }
    }
    let inverse: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| aug[i][n + j] / aug[i][i]).collect())
        .collect();
    let condition = a_norm * norm1(&inverse);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    let x = (0..n).map(|i| aug[i][2 * n] / aug[i][i]).collect();
    Ok((x, condition))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFit {
    pub params: PolynomialFestoParams,
    pub condition: f64,
    /// Sign changes of `f'(ε)` on `[0, max εmax]`.
    pub slope_sign_changes: usize,
}

impl PolynomialFit {
    /// Oscillation between anchors, typical of high-order interpolation.
    pub fn wandering(&self) -> bool {
        self.slope_sign_changes > WANDERING_SLOPE_CHANGES
    }
}

fn count_slope_sign_changes(params: &PolynomialFestoParams, upper: f64) -> usize {
    const SAMPLES: usize = 2000;
    let mut changes = 0;
    let mut last = 0.0f64;
    for i in 0..=SAMPLES {
        let s = params.shape_slope(upper * i as f64 / SAMPLES as f64);
        if s == 0.0 {
            continue;
        }
        if last != 0.0 && s.signum() != last.signum() {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Interpolates `f(ε)` through the zero-force anchors: with `n` anchors the
/// polynomial has `n` coefficients and `F(εmax(P_i), P_i) = 0` for each.
pub fn fit_polynomial_coeffs(
    anchors: &[ContractionAnchor],
    geometry: MuscleGeometry,
) -> Result<PolynomialFit> {
    let n = anchors.len();
    if n == 0 {
        return Err(Error::Empty("anchor set"));
    }
    if n > MAX_POLY_ANCHORS {
        return Err(Error::Domain(format!(
            "{n} anchors exceed the supported maximum of {MAX_POLY_ANCHORS}"
        )));
    }
    let matrix: Vec<Vec<f64>> = anchors
        .iter()
        .map(|a| (1..=n as i32).map(|k| a.eps_max.powi(k)).collect())
        .collect();
    let rhs: Vec<f64> = anchors
        .iter()
        .map(|a| geometry.a_minus_b() * a.pressure)
        .collect();
    let (coeffs, condition) = solve_small(&matrix, &rhs)?;
    let params = PolynomialFestoParams::new(geometry, coeffs)?;
    let upper = anchors.iter().map(|a| a.eps_max).fold(0.0, f64::max);
    let slope_sign_changes = count_slope_sign_changes(&params, upper);
    Ok(PolynomialFit {
        params,
        condition,
        slope_sign_changes,
    })
}

/// Solves the two zero-force conditions `εmax(P)(cP + e) = (a − b) P (P + d)`
/// for `(d, e)` at a fixed `c` (Pa).
pub fn fit_rational_params(
    first: ContractionAnchor,
    second: ContractionAnchor,
    c: f64,
    geometry: MuscleGeometry,
) -> Result<RationalFestoParams> {
    ensure_finite(c, "c")?;
    let ab = geometry.a_minus_b();
    let (p1, e1) = (first.pressure, first.eps_max);
    let (p2, e2) = (second.pressure, second.eps_max);
    if p1 == p2 {
        return Err(Error::Degenerate("anchors share the same pressure".into()));
    }
    // linear in (d, e):  ε_i e − (a−b) P_i d = (a−b) P_i² − c ε_i P_i
    let det = -e1 * ab * p2 + e2 * ab * p1;
    let scale = ab * (e1 * p2).abs().max((e2 * p1).abs());
    if det.abs() <= 1e-12 * scale {
        return Err(Error::Degenerate(format!(
            "anchors ({} Pa, {}) and ({} Pa, {}) give P_II − (ε_II/ε_I) P_I ≈ 0",
            p1, e1, p2, e2
        )));
    }
    let r1 = ab * p1 * p1 - c * e1 * p1;
    let r2 = ab * p2 * p2 - c * e2 * p2;
    let e = (r1 * (-ab * p2) - (-ab * p1) * r2) / det;
    let d = (e1 * r2 - e2 * r1) / det;
    RationalFestoParams::new(geometry, c, d, e)
}

/// Contraction scale `k(P_i) = εmax_theoretical / εmax(P_i)` for each anchor.
pub fn fit_k_table(anchors: &[ContractionAnchor], geometry: MuscleGeometry) -> Result<KTable> {
    if anchors.is_empty() {
        return Err(Error::Empty("anchor set"));
    }
    let mut points: Vec<(f64, f64)> = anchors
        .iter()
        .map(|a| {
            if a.eps_max == 0.0 {
                Err(Error::Domain(format!(
                    "zero maximum contraction at {} Pa",
                    a.pressure
                )))
            } else {
                Ok((a.pressure, geometry.eps_max() / a.eps_max))
            }
        })
        .collect::<Result<_>>()?;
    points.sort_by(|x, y| x.0.total_cmp(&y.0));
    KTable::new(points)
}

/// Scores candidate `c` values by how well the fitted rational model
/// reproduces additional anchors (RMS error in εmax). Advisory only.
pub fn scan_c(
    first: ContractionAnchor,
    second: ContractionAnchor,
    others: &[ContractionAnchor],
    candidates: &[f64],
    geometry: MuscleGeometry,
) -> Vec<(f64, Result<f64>)> {
    candidates
        .iter()
        .map(|&c| {
            let score = fit_rational_params(first, second, c, geometry).and_then(|m| {
                if others.is_empty() {
                    return Ok(0.0);
                }
                let mut sum = 0.0;
                for a in others {
                    let err = m.eps_max_at(a.pressure)? - a.eps_max;
                    sum += err * err;
                }
                Ok((sum / others.len() as f64).sqrt())
            });
            (c, score)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleResidual {
    /// Index of the sample in the dataset.
    pub index: usize,
    /// `F_model − F_measured` in N, or `None` when the sample is outside the model's domain.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: String,
    pub residuals: Vec<SampleResidual>,
    /// Over in-domain samples, N.
    pub rmse: f64,
    pub max_abs: f64,
    pub out_of_domain: usize,
}

/// Compares model predictions with measured samples.
pub fn residual_report(model: &MuscleModel, data: &ForceCurveDataset) -> Result<FitReport> {
    if data.samples.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let residuals: Vec<SampleResidual> = data
        .samples
        .iter()
        .enumerate()
        .map(|(index, s)| SampleResidual {
            index,
            residual: model.force(s.eps, s.pressure).ok().map(|f| f - s.force),
        })
        .collect();
    let used: Vec<f64> = residuals.iter().filter_map(|r| r.residual).collect();
    let out_of_domain = residuals.len() - used.len();
    let (rmse, max_abs) = if used.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        let ss: f64 = used.iter().map(|r| r * r).sum();
        (
            (ss / used.len() as f64).sqrt(),
            used.iter().fold(0.0f64, |m, r| m.max(r.abs())),
        )
    };
    Ok(FitReport {
        model: model.name().to_string(),
        residuals,
        rmse,
        max_abs,
        out_of_domain,
    })
}
