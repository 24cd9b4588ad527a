use std::fs;
use std::process::Command;

use pam_statics::cli::{main_with, parse_command, CommandPlan, ParseFailure};
use pam_statics::config::ModelKind;
use pam_statics::cubic::CubicCoefficients;

const FESTO_CONFIG: &str = "\
# Festo-type muscle
model = festo
r0_cm = 1.09
l0_cm = 40
alpha0_deg = 25.5
c_bar = 0
d_bar = -10.5
e_bar2 = -779
R_cm = 2
eps_threshold = 0.025
p_min_bar = 0
p_max_bar = 5
";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pam").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn festo_config(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("festo.toml");
    fs::write(&path, FESTO_CONFIG).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn roots_plan_maps_coefficients() {
    let plan = parse_command(["pam", "roots", "--a2", "-6", "--a1", "11", "--a0", "-6"]).unwrap();
    assert_eq!(
        plan,
        CommandPlan::Roots(CubicCoefficients::new(-6.0, 11.0, -6.0))
    );
    let (code, out, _) = run(&["roots", "--a2", "-6", "--a1", "11", "--a0", "-6"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("1\n2\n3\n"), "{out}");
}

#[test]
fn sweep_plan_reproduces_the_festo_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = festo_config(&dir);
    let plan = parse_command([
        "pam",
        "sweep",
        "--model",
        "festo",
        "--k-min",
        "6",
        "--k-max",
        "9",
        "--k-step",
        "1",
        "--theta-max-deg",
        "125",
        "--theta-step-deg",
        "5",
        "--config",
        &cfg,
        "--out",
        "festo_sweep.csv",
    ])
    .unwrap();
    match plan {
        CommandPlan::Sweep {
            config,
            stiffness,
            theta,
            out,
            ..
        } => {
            assert_eq!(config.kind(), ModelKind::Festo);
            assert_eq!(stiffness.len(), 4);
            assert_eq!(theta.len(), 51);
            assert_eq!(out.unwrap().to_str(), Some("festo_sweep.csv"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn fit_rational_prints_nominal_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = festo_config(&dir);
    let (code, out, _) = run(&[
        "fit-rational",
        "--anchor",
        "3:0.225",
        "--anchor",
        "5:0.275",
        "--c",
        "0",
        "--config",
        &cfg,
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("d = -10.5 bar"), "{out}");
    assert!(out.contains("e = -779.099013 bar^2"), "{out}");
}

#[test]
fn inverse_at_center_and_beyond_the_box() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = festo_config(&dir);
    let (code, out, _) = run(&[
        "actuator-inverse",
        "--model",
        "festo",
        "--theta-deg",
        "0",
        "--k",
        "8",
        "--config",
        &cfg,
    ]);
    assert_eq!(code, 0);
    assert!(
        out.contains("P1 = 3.23090516 bar") && out.contains("P2 = 3.23090516 bar"),
        "{out}"
    );

    let (code, _, err) = run(&[
        "actuator-inverse",
        "--model",
        "festo",
        "--theta-deg",
        "0",
        "--k",
        "12",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("infeasible"), "{err}");
}

#[test]
fn force_beyond_eps_max_is_a_domain_error() {
    let (code, out, err) = run(&[
        "force", "--model", "mckibben", "--eps", "0.5", "--p-bar", "3",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("0.37043"), "{err}");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["roots", "--a2", "1", "--a1", "1"]).0, 1);
    let (code, _, err) = run(&["force", "--model", "mckibben", "--eps", "0.1"]);
    assert_eq!(code, 1);
    assert!(err.contains("--p-bar"), "{err}");
    assert!(matches!(
        parse_command([
            "pam", "force", "--model", "festo", "--set", "r0_bar=1", "--eps", "0", "--p-bar", "1"
        ]),
        Err(ParseFailure::Invalid(
            pam_statics::Error::DimensionMismatch { .. }
        ))
    ));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let (code, _, err) = run(&["roots", "--a2", "0", "--a1", "0", "--a0", "0"]);
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = run(&[
        "force",
        "--config",
        "/nonexistent/pam.cfg",
        "--eps",
        "0",
        "--p-bar",
        "1",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = festo_config(&dir);
    match parse_command([
        "pam", "force", "--config", &cfg, "--d-bar", "-11", "--eps", "0", "--p-bar", "1",
    ])
    .unwrap()
    {
        CommandPlan::Force { config, .. } => assert_eq!(config.d, Some(-11e5)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sweep_output_is_deterministic_across_execution_modes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = festo_config(&dir);
    let base = [
        "sweep",
        "--k-min",
        "6",
        "--k-max",
        "9",
        "--k-step",
        "1",
        "--theta-max-deg",
        "125",
        "--theta-step-deg",
        "5",
        "--config",
        &cfg,
    ];
    let (c1, a, _) = run(&base);
    let (c2, b, _) = run(&base);
    let mut seq = base.to_vec();
    seq.push("--sequential");
    let (c3, c, _) = run(&seq);
    assert_eq!((c1, c2, c3), (0, 0, 0));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.lines().count(), 1 + 4 * 51);
}

#[test]
fn residuals_over_a_csv() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("curve.csv");
    fs::write(
        &data,
        "pressure_bar,contraction_ratio,force_N\n3,0,700\n3,0.1,350\n5,0,1400\n5,0.5,10\n",
    )
    .unwrap();
    let (code, out, err) = run(&[
        "residuals",
        "--model",
        "festo",
        "--data",
        data.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().last().unwrap().ends_with(",NaN"), "{out}");
    assert!(err.contains("rmse"), "{err}");
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pam");
    let ok = Command::new(bin)
        .args(["roots", "--a2", "-6", "--a1", "11", "--a0", "-6"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let infeasible = Command::new(bin)
        .args([
            "actuator-inverse",
            "--model",
            "festo",
            "--theta-deg",
            "0",
            "--k",
            "12",
        ])
        .output()
        .unwrap();
    assert_eq!(infeasible.status.code(), Some(2));
    assert!(!infeasible.stderr.is_empty());
    let bad = Command::new(bin).args(["nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn shipped_configs_load() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let festo = dir.join("festo.cfg");
    let (code, out, _) = run(&[
        "actuator-inverse",
        "--config",
        festo.to_str().unwrap(),
        "--theta-deg",
        "0",
        "--k",
        "8",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("P1 = 3.23090516 bar"), "{out}");
    let mck = dir.join("mckibben.cfg");
    let (code, out, _) = run(&[
        "force",
        "--config",
        mck.to_str().unwrap(),
        "--eps",
        "0",
        "--p-bar",
        "5",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("F = 1504.59535 N"), "{out}");
}
