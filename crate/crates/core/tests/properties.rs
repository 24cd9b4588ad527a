use pam_statics::actuator::init_contraction;
use pam_statics::cubic::{solve_cubic, CubicCoefficients};
use pam_statics::fitting::{fit_rational_params, ContractionAnchor};
use pam_statics::muscle::{HoganParams, RationalFestoParams};
use pam_statics::units::{bar, cm, deg};
use pam_statics::{
    Activation, Actuator, ActuatorConfig, Feasibility, MuscleGeometry, PressurePair, StaticMuscle,
};
use proptest::prelude::*;

fn festo() -> Actuator<RationalFestoParams> {
    let g = MuscleGeometry::new(cm(1.09), cm(40.0), deg(25.5)).unwrap();
    let m = RationalFestoParams::new(g, 0.0, bar(-10.5), -779e10).unwrap();
    let eps0 = init_contraction(&m, bar(5.0)).unwrap();
    Actuator::new_festo(m, ActuatorConfig::with_defaults(cm(2.0), eps0).unwrap()).unwrap()
}

fn mckibben() -> Actuator<MuscleGeometry> {
    let g = MuscleGeometry::new(cm(1.0), cm(40.0), deg(23.5)).unwrap();
    Actuator::new_mckibben(
        g,
        ActuatorConfig::with_defaults(cm(2.0), g.eps_max() / 2.0).unwrap(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn theoretical_force_decreases_with_contraction(p in 0.5f64..6.0, e1 in 0.0f64..0.37, e2 in 0.0f64..0.37) {
        let g = MuscleGeometry::new(cm(1.0), cm(40.0), deg(23.5)).unwrap();
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(g.force(lo, bar(p)).unwrap() > g.force(hi, bar(p)).unwrap());
    }

    #[test]
    fn rational_fit_reproduces_its_anchors(
        p1 in 1.0f64..3.0, p2 in 3.5f64..6.0, e1 in 0.15f64..0.22, de in 0.01f64..0.08,
    ) {
        let g = MuscleGeometry::new(cm(1.09), cm(40.0), deg(25.5)).unwrap();
        let a1 = ContractionAnchor::new(bar(p1), e1).unwrap();
        let a2 = ContractionAnchor::new(bar(p2), e1 + de).unwrap();
        if let Ok(m) = fit_rational_params(a1, a2, 0.0, g) {
            for a in [a1, a2] {
                if let Ok(e) = m.eps_max_at(a.pressure) {
                    prop_assert!((e - a.eps_max).abs() < 1e-9, "{} vs {}", e, a.eps_max);
                    prop_assert!(m.force(a.eps_max, a.pressure).unwrap().abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn festo_equilibrium_has_zero_torque(p1 in 0.0f64..5.0, p2 in 0.0f64..5.0) {
        let a = festo();
        let pp = PressurePair::new(bar(p1), bar(p2));
        let th = a.equilibrium(pp).unwrap();
        let (lo, hi) = a.joint_limits();
        prop_assume!(th > lo && th < hi);
        prop_assert!(a.direct(pp, th).unwrap().torque.abs() < 1e-9);
    }

    #[test]
    fn festo_inverse_recovers_feasible_commands(p1 in 0.3f64..5.0, p2 in 0.3f64..5.0) {
        let a = festo();
        let pp = PressurePair::new(bar(p1), bar(p2));
        let th = a.equilibrium(pp).unwrap();
        let (lo, hi) = a.joint_limits();
        prop_assume!(th > lo && th < hi);
        let k = a.direct(pp, th).unwrap().stiffness;
        let sol = a.inverse(th, k).unwrap();
        if sol.feasibility == Feasibility::Feasible {
            let got = sol.command.unwrap();
            let check = a.direct(got, th).unwrap();
            prop_assert!(check.torque.abs() < 1e-6);
            prop_assert!((check.stiffness - k).abs() / k < 1e-6);
        } else {
            prop_assert!(sol.command.is_some() || sol.feasibility == Feasibility::NoRealRoot);
        }
    }

    #[test]
    fn mckibben_inverse_then_direct(th in -2.5f64..2.5, k in 0.5f64..8.0, t in -5.0f64..5.0) {
        let a = mckibben();
        let sol = a.inverse(th, k, t).unwrap();
        let pp = sol.command.unwrap();
        // evaluate outside the pressure box through the same closed form
        prop_assert!(sol.torque_residual <= 1e-9 * (1.0 + t.abs()));
        prop_assert!(sol.stiffness_residual <= 1e-9 * k);
        if sol.is_feasible() {
            let ts = a.direct(pp, th).unwrap();
            prop_assert!((ts.torque - t).abs() <= 1e-9 * (1.0 + t.abs()));
        }
    }

    #[test]
    fn hogan_stiffness_ignores_angle(u1 in 0.0f64..1.0, u2 in 0.0f64..1.0, th in -2.0f64..2.0) {
        let m = HoganParams::new(1500.0, 0.37, cm(40.0)).unwrap();
        let a = Actuator::new_hogan(m, ActuatorConfig::with_defaults(cm(2.0), 0.185).unwrap()).unwrap();
        let act = Activation::new(u1, u2);
        let k0 = a.direct(act, 0.0).unwrap().stiffness;
        let k = a.direct(act, th).unwrap().stiffness;
        prop_assert!((k - k0).abs() <= 1e-12 * k0.max(1.0));
    }

    #[test]
    fn cubic_roots_from_known_roots(r1 in -50.0f64..50.0, r2 in -50.0f64..50.0, r3 in -50.0f64..50.0) {
        let c = CubicCoefficients::new(-(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3);
        let sol = solve_cubic(c).unwrap();
        for x in &sol.roots {
            prop_assert!(c.eval(*x).abs() <= 1e-9 * c.scale());
        }
        let mut want = [r1, r2, r3];
        want.sort_by(f64::total_cmp);
        // every true root is close to a returned one
        for w in want {
            let nearest = sol.roots.iter().map(|x| (x - w).abs()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-5 * w.abs().max(1.0), "{} missing from {:?}", w, sol.roots);
        }
    }
}
