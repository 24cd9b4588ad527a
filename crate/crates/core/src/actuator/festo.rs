//! Actuator built from two rational-model muscles, `f = (cP + e)/(P + d)`.
//!
//! With `u = P1 + d`, `v = P2 + d`, `m = uv`, `s = u + v`, `e' = e − cd`,
//! `B = π r0² R² / l0` and `x = Rθ/l0`, the direct model reads
//!
//! ```text
//! K = B (2c + e' s / m)
//! T = π r0² R [ (a−b)(P1 − P2) − ε0 (g1 − g2) − x (g1 + g2) ]
//! ```
//!
//! Imposing `T = 0` and a stiffness `K` gives `s = κ m` with
//! `κ = (K/B − 2c)/e'` and `(u − v)((a−b) m + ε0 e') = x (K/B) m`.
//! Squaring and using `(u − v)² = s² − 4m` leaves a cubic in `m`:
//!
//! ```text
//! (κ² m − 4) ((a−b) m + ε0 e')² − x² (K/B)² m = 0
//! ```

use super::{
    check_box, Actuator, ActuatorConfig, Feasibility, InverseSolution, PressurePair,
    TorqueStiffness,
};
use crate::cubic::{solve_cubic, CubicCoefficients};
use crate::error::{ensure_finite, Error, Result};
use crate::muscle::{RationalFestoParams, CONTRACTION_TOL};

/// The cubic is solved with pressures expressed in this unit (Pa) to keep
/// its coefficients near unity.
const PRESSURE_SCALE: f64 = 1e5;
/// Normalized forward-check residual below which a candidate counts as an exact solution.
const CANDIDATE_TOL: f64 = 1e-6;

/// Initial contraction halfway to the zero-force contraction at `p_max`.
pub fn init_contraction(params: &RationalFestoParams, p_max: f64) -> Result<f64> {
    Ok(params.eps_max_at(p_max)? / 2.0)
}

impl Actuator<RationalFestoParams> {
    pub fn new_festo(muscle: RationalFestoParams, config: ActuatorConfig) -> Result<Self> {
        muscle.validate_pressure_box(config.p_min, config.p_max)?;
        Ok(Self { muscle, config })
    }

    /// `π r0² R² / l0`, in m³.
    fn stiffness_gain(&self) -> f64 {
        let r = self.config.pulley_radius;
        self.muscle.geometry.section() * r * r / self.muscle.geometry.l0()
    }

    /// Closed-form torque and stiffness. Contractions beyond `εmax(P)` are
    /// evaluated by continuation of the same formula.
    pub fn direct(&self, pp: PressurePair, theta: f64) -> Result<TorqueStiffness> {
        check_box(&self.config, &pp)?;
        self.check_angle(theta)?;
        self.evaluate(pp, theta)
    }

    fn evaluate(&self, pp: PressurePair, theta: f64) -> Result<TorqueStiffness> {
        let m = &self.muscle;
        let g1 = m.shape(pp.p1)?;
        let g2 = m.shape(pp.p2)?;
        let r = self.config.pulley_radius;
        let x = self.stroke(theta);
        let torque = m.geometry.section()
            * r
            * (m.geometry.a_minus_b() * pp.difference()
                - self.config.eps0 * (g1 - g2)
                - x * (g1 + g2));
        Ok(TorqueStiffness {
            torque,
            stiffness: self.stiffness_gain() * (g1 + g2),
        })
    }

    /// Joint angle at which the torque vanishes for the given pressures.
    pub fn equilibrium(&self, pp: PressurePair) -> Result<f64> {
        ensure_finite(pp.p1, "pressure P1")?;
        ensure_finite(pp.p2, "pressure P2")?;
        let m = &self.muscle;
        let u = m.shifted(pp.p1)?;
        let v = m.shifted(pp.p2)?;
        let e_eff = m.e - m.c * m.d;
        let prod = u * v;
        let den = 2.0 * m.c * prod + e_eff * (u + v);
        let scale = (2.0 * m.c * prod).abs() + (e_eff * (u + v)).abs();
        if den.abs() <= 1e-12 * scale || den == 0.0 {
            return Err(Error::Degenerate(
                "P1 + P2 + 2d vanishes; equilibrium undefined".into(),
            ));
        }
        let x = pp.difference() * (m.geometry.a_minus_b() * prod + self.config.eps0 * e_eff) / den;
        Ok(x * m.geometry.l0() / self.config.pulley_radius)
    }

    fn contraction_ok(&self, pp: &PressurePair, theta: f64) -> bool {
        let x = self.stroke(theta);
        let eps = [self.config.eps0 + x, self.config.eps0 - x];
        [pp.p1, pp.p2].iter().zip(eps).all(|(&p, e)| {
            e >= self.config.eps_threshold - CONTRACTION_TOL
                && matches!(self.muscle.eps_max_at(p), Ok(em) if e <= em + CONTRACTION_TOL)
        })
    }

    /// Total distance of a command outside the pressure box.
    fn box_violation(&self, pp: &PressurePair) -> f64 {
        let c = &self.config;
        [pp.p1, pp.p2]
            .iter()
            .map(|&p| (c.p_min - p).max(0.0) + (p - c.p_max).max(0.0))
            .sum()
    }

    /// Shifted pressure sums `s = u + v` and differences `δ = u − v`, in units of
    /// `PRESSURE_SCALE`, for each real root of the equilibrium-stiffness cubic.
    fn candidate_shifts(&self, theta: f64, k: f64) -> Result<Vec<(f64, f64)>> {
        let m = &self.muscle;
        let ps = PRESSURE_SCALE;
        let kb = k / self.stiffness_gain() / ps;
        let cs = m.c / ps;
        let es = (m.e - m.c * m.d) / (ps * ps);
        let alpha = m.geometry.a_minus_b();
        let eps0 = self.config.eps0;
        let x = self.stroke(theta);
        if es == 0.0 {
            return Ok(Vec::new());
        }
        let kappa = (kb - 2.0 * cs) / es;
        let lead = kappa * kappa * alpha * alpha;
        if lead.abs() < 1e-300 || !lead.is_finite() {
            return Ok(Vec::new());
        }
        let c2 = 2.0 * kappa * kappa * alpha * eps0 * es - 4.0 * alpha * alpha;
        let c1 = kappa * kappa * eps0 * eps0 * es * es - 8.0 * alpha * eps0 * es - x * x * kb * kb;
        let c0 = -4.0 * eps0 * eps0 * es * es;
        let roots = solve_cubic(CubicCoefficients::new(c2 / lead, c1 / lead, c0 / lead))?;

        let mut out = Vec::new();
        for mu in roots.roots {
            let s = kappa * mu;
            // δ from the unsquared torque balance when it is well conditioned;
            // otherwise both signs of sqrt(s² − 4m), left to the forward check.
            let lin = alpha * mu + eps0 * es;
            if lin.abs() > 1e-9 * (alpha * mu).abs().max((eps0 * es).abs()) {
                out.push((s, x * kb * mu / lin));
                continue;
            }
            let disc = s * s - 4.0 * mu;
            if disc < -1e-9 * (s * s).max(4.0 * mu.abs()) {
                continue;
            }
            let root = disc.max(0.0).sqrt();
            out.push((s, root));
            if root != 0.0 {
                out.push((s, -root));
            }
        }
        Ok(out)
    }

    /// Pressures placing the equilibrium at `theta` with stiffness `k`.
    /// Only the zero-torque case is supported.
    pub fn inverse(&self, theta: f64, k: f64) -> Result<InverseSolution<PressurePair>> {
        ensure_finite(k, "stiffness")?;
        self.check_angle(theta)?;
        if k <= 0.0 {
            return Ok(InverseSolution::no_root());
        }
        let ps = PRESSURE_SCALE;
        let d = self.muscle.d;
        let g = &self.muscle.geometry;
        let torque_scale =
            g.section() * self.config.pulley_radius * g.a_minus_b() * self.config.p_max;

        struct Candidate {
            pp: PressurePair,
            torque: f64,
            stiffness: f64,
            score: f64,
        }
        let mut candidates = Vec::new();
        for (s, delta) in self.candidate_shifts(theta, k)? {
            let u = 0.5 * (s + delta);
            let v = 0.5 * (s - delta);
            let pp = PressurePair::new(u * ps - d, v * ps - d);
            let Ok(ts) = self.evaluate(pp, theta) else {
                continue;
            };
            let score = ts.torque.abs() / torque_scale + (ts.stiffness - k).abs() / k;
            if score.is_finite() && score <= CANDIDATE_TOL {
                candidates.push(Candidate {
                    pp,
                    torque: ts.torque,
                    stiffness: ts.stiffness,
                    score,
                });
            }
        }
        if candidates.is_empty() {
            return Ok(InverseSolution::no_root());
        }

        let feasible = |c: &Candidate| {
            self.config.in_box(c.pp.p1)
                && self.config.in_box(c.pp.p2)
                && self.contraction_ok(&c.pp, theta)
        };
        let best_feasible = candidates.iter().filter(|c| feasible(c)).min_by(|a, b| {
            if (a.score - b.score).abs() <= 1e-12 {
                a.pp.sum().total_cmp(&b.pp.sum())
            } else {
                a.score.total_cmp(&b.score)
            }
        });
        let (chosen, feasibility) = match best_feasible {
            Some(c) => (c, Feasibility::Feasible),
            None => {
                let c = candidates
                    .iter()
                    .min_by(|a, b| {
                        self.box_violation(&a.pp)
                            .total_cmp(&self.box_violation(&b.pp))
                    })
                    .unwrap();
                (c, Feasibility::ClippedInfeasible)
            }
        };
        Ok(InverseSolution {
            command: Some(chosen.pp),
            feasibility,
            torque_residual: chosen.torque.abs(),
            stiffness_residual: (chosen.stiffness - k).abs(),
        })
    }

    /// Stiffness range at θ = 0 over the pressure box alone, `(K(p_min), K(p_max))`
    /// sorted ascending.
    pub fn pressure_box_stiffness_range(&self) -> Result<(f64, f64)> {
        let k = |p: f64| -> Result<f64> { Ok(2.0 * self.stiffness_gain() * self.muscle.shape(p)?) };
        let (a, b) = (k(self.config.p_min)?, k(self.config.p_max)?);
        Ok((a.min(b), a.max(b)))
    }

    /// Stiffness range at θ = 0 restricted to pressures whose zero-force
    /// contraction reaches `ε0`, i.e. where both muscles stay taut.
    pub fn feasible_stiffness_range_at_center(&self) -> Result<Option<(f64, f64)>> {
        let eps0 = self.config.eps0;
        let ok = |p: f64| matches!(self.muscle.eps_max_at(p), Ok(e) if e >= eps0);
        const STEPS: usize = 2000;
        let (lo, hi) = (self.config.p_min, self.config.p_max);
        let grid: Vec<f64> = (0..=STEPS)
            .map(|i| lo + (hi - lo) * i as f64 / STEPS as f64)
            .collect();
        let mut ks: Vec<f64> = Vec::new();
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (oa, ob) = (ok(a), ok(b));
            if oa {
                ks.push(a);
            }
            if oa != ob {
                // refine the boundary of the taut region
                let (mut bad, mut good) = if oa { (b, a) } else { (a, b) };
                for _ in 0..100 {
                    let mid = 0.5 * (bad + good);
                    if ok(mid) {
                        good = mid;
                    } else {
                        bad = mid;
                    }
                }
                ks.push(good);
            }
        }
        if ok(hi) {
            ks.push(hi);
        }
        if ks.is_empty() {
            return Ok(None);
        }
        let mut range = (f64::INFINITY, f64::NEG_INFINITY);
        for p in ks {
            let k = 2.0 * self.stiffness_gain() * self.muscle.shape(p)?;
            range = (range.0.min(k), range.1.max(k));
        }
        Ok(Some(range))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MuscleGeometry;
    use crate::units::{bar, cm, deg, PA2_PER_BAR2};

    fn nominal_params() -> RationalFestoParams {
        let g = MuscleGeometry::new(cm(1.09), cm(40.0), deg(25.5)).unwrap();
        RationalFestoParams::new(g, 0.0, bar(-10.5), -779.0 * PA2_PER_BAR2).unwrap()
    }

    fn actuator() -> Actuator<RationalFestoParams> {
        let cfg = ActuatorConfig::with_defaults(cm(2.0), 0.1375).unwrap();
        Actuator::new_festo(nominal_params(), cfg).unwrap()
    }

    /// The printed c = 0 form with A = π r0² R² e / l0.
    fn printed_form(
        a: &Actuator<RationalFestoParams>,
        pp: PressurePair,
        theta: f64,
    ) -> TorqueStiffness {
        let m = &a.muscle;
        let g = &m.geometry;
        let r = a.config.pulley_radius;
        let x = r * theta / g.l0();
        let (i1, i2) = (1.0 / (pp.p1 + m.d), 1.0 / (pp.p2 + m.d));
        let torque = g.section()
            * r
            * (g.a_minus_b() * (pp.p1 - pp.p2)
                - m.e * a.config.eps0 * (i1 - i2)
                - m.e * x * (i1 + i2));
        let big_a = g.section() * r * r * m.e / g.l0();
        TorqueStiffness {
            torque,
            stiffness: big_a * (i1 + i2),
        }
    }

    #[test]
    fn init_contraction_examples() {
        let p = nominal_params();
        assert!((init_contraction(&p, bar(5.0)).unwrap() - 0.1375).abs() < 1e-4);
        assert!((init_contraction(&p, bar(4.0)).unwrap() - 0.130_016_523_279_611_7).abs() < 1e-12);
    }

    #[test]
    fn stiffness_at_box_corners() {
        let a = actuator();
        let k5 = a
            .direct(PressurePair::new(bar(5.0), bar(5.0)), 0.0)
            .unwrap();
        let k0 = a.direct(PressurePair::new(0.0, 0.0), 0.0).unwrap();
        assert_eq!(k5.torque, 0.0);
        assert!((k5.stiffness - 10.573_228_852_791_622).abs() < 1e-9);
        assert!((k0.stiffness - 5.538_357_970_509_897).abs() < 1e-9);
        let (lo, hi) = a.pressure_box_stiffness_range().unwrap();
        assert!((lo - k0.stiffness).abs() < 1e-12 && (hi - k5.stiffness).abs() < 1e-12);
    }

    #[test]
    fn taut_stiffness_range_starts_where_eps_max_reaches_eps0() {
        let (lo, hi) = actuator()
            .feasible_stiffness_range_at_center()
            .unwrap()
            .unwrap();
        // εmax(P) = ε0 at P ≈ 1.5332 bar
        assert!((lo - 6.485_375_857_708_625).abs() < 1e-6, "{lo}");
        assert!((hi - 10.573_228_852_791_622).abs() < 1e-9);
    }

    #[test]
    fn printed_form_is_the_c_zero_case() {
        let a = actuator();
        for (p1, p2, th) in [(4.0, 2.0, 0.3), (1.0, 5.0, -1.2), (3.3, 3.3, 0.0)] {
            let pp = PressurePair::new(bar(p1), bar(p2));
            let got = a.direct(pp, th).unwrap();
            let want = printed_form(&a, pp, th);
            assert!(
                (got.torque - want.torque).abs() <= 4.0 * f64::EPSILON * want.torque.abs().max(1.0)
            );
            assert!((got.stiffness - want.stiffness).abs() <= 2.0 * f64::EPSILON * want.stiffness);
        }
    }

    /// Zero of T(θ) by bisection.
    fn bisect_equilibrium(a: &Actuator<RationalFestoParams>, pp: PressurePair) -> f64 {
        let (mut lo, mut hi) = a.joint_limits();
        let t = |th: f64| a.direct(pp, th).unwrap().torque;
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
    fn equilibrium_matches_bisection() {
        let a = actuator();
        let pp = PressurePair::new(bar(4.0), bar(2.0));
        let th = a.equilibrium(pp).unwrap();
        assert!(th > 0.0);
        assert!((th - bisect_equilibrium(&a, pp)).abs() < 1e-12, "{th}");
        assert_eq!(
            a.equilibrium(PressurePair::new(bar(3.0), bar(3.0)))
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn inverse_at_center() {
        let a = actuator();
        let s = a.inverse(0.0, 8.0).unwrap();
        assert!(s.is_feasible(), "{s:?}");
        let pp = s.command.unwrap();
        assert!((pp.p1 / 1e5 - 3.230_905_163_705_76).abs() < 1e-9, "{pp:?}");
        assert!((pp.p1 - pp.p2).abs() < 1e-6);
    }

    #[test]
    fn inverse_beyond_box_is_tagged() {
        let a = actuator();
        let s = a.inverse(0.0, 12.0).unwrap();
        assert_eq!(s.feasibility, Feasibility::ClippedInfeasible);
        assert!(s.command.unwrap().p1 > bar(5.0));
        let clipped = s.clipped(&a.config).unwrap();
        assert_eq!(clipped.p1, bar(5.0));
        assert_eq!(
            a.inverse(0.3, 0.0).unwrap().feasibility,
            Feasibility::NoRealRoot
        );
    }

    #[test]
    fn inverse_sign_follows_angle() {
        let a = actuator();
        for th in [0.5f64, -0.5, 1.8, -1.8] {
            let s = a.inverse(th, 8.0).unwrap();
            let pp = s.command.unwrap();
            assert_eq!(pp.difference().signum(), th.signum(), "{th}: {s:?}");
            let ts = a.direct(pp, th).unwrap();
            assert!(ts.torque.abs() < 1e-6 && (ts.stiffness - 8.0).abs() < 8e-6);
        }
    }

    #[test]
    fn general_c_round_trip() {
        let g = MuscleGeometry::new(cm(1.09), cm(40.0), deg(25.5)).unwrap();
        let params =
            RationalFestoParams::new(g, bar(2.0), bar(-10.5), -800.0 * PA2_PER_BAR2).unwrap();
        let eps0 = init_contraction(&params, bar(5.0)).unwrap();
        let a = Actuator::new_festo(
            params,
            ActuatorConfig::with_defaults(cm(2.0), eps0).unwrap(),
        )
        .unwrap();
        let pp = PressurePair::new(bar(4.2), bar(2.9));
        let th = a.equilibrium(pp).unwrap();
        let ts = a.direct(pp, th).unwrap();
        assert!(ts.torque.abs() < 1e-9);
        let s = a.inverse(th, ts.stiffness).unwrap();
        let back = s.command.unwrap();
        assert!(
            (back.p1 - pp.p1).abs() < 1e-3 && (back.p2 - pp.p2).abs() < 1e-3,
            "{s:?}"
        );
    }
}
