//! Command-line front end: argument parsing into a [`CommandPlan`] and its execution.
//!
//! Flags use human units (bar, cm, deg, N·m/rad); everything is converted to
//! SI when the plan is built.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::actuator::{
    sweep_inverse_with, Activation, Execution, Feasibility, Grid, InverseSolution, PressurePair,
    SweepTable,
};
use crate::config::{ModelConfig, ModelKind};
use crate::cubic::{solve_cubic, CubicCoefficients};
use crate::dataset::{format_sig9, load_curve_csv, write_sweep, write_sweep_csv};
use crate::error::{Error, Result};
use crate::fitting::{
    fit_polynomial_coeffs, fit_rational_params, residual_report, ContractionAnchor,
    WANDERING_SLOPE_CHANGES,
};
use crate::muscle::StaticMuscle;
use crate::units::{bar, cm, deg, to_bar, PA2_PER_BAR2};

#[derive(Debug, Parser)]
#[command(
    name = "pam",
    version,
    about = "Static models of pneumatic artificial muscles and antagonist actuators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit d and e of the rational model from two zero-force anchors.
    FitRational {
        #[command(flatten)]
        model: ModelArgs,
        /// Zero-force anchor `P_bar:eps_max`; give exactly two.
        #[arg(long = "anchor", value_name = "P:EPS", required = true)]
        anchors: Vec<String>,
    },
    /// Interpolate the polynomial shape function through 1–6 anchors.
    FitPolynomial {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "anchor", value_name = "P:EPS", required = true)]
        anchors: Vec<String>,
    },
    /// Muscle force at one state.
    Force {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        state: MuscleState,
    },
    /// Muscle stiffness dF/dl at one state.
    Stiffness {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        state: MuscleState,
    },
    /// Actuator torque and stiffness for given commands.
    ActuatorDirect {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "theta-deg", allow_hyphen_values = true)]
        theta_deg: f64,
        #[arg(long = "p1-bar")]
        p1_bar: Option<f64>,
        #[arg(long = "p2-bar")]
        p2_bar: Option<f64>,
        #[arg(long)]
        u1: Option<f64>,
        #[arg(long)]
        u2: Option<f64>,
    },
    /// Commands placing the joint at an angle with a given stiffness.
    ActuatorInverse {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "theta-deg", allow_hyphen_values = true)]
        theta_deg: f64,
        /// Stiffness, N·m/rad.
        #[arg(long)]
        k: f64,
        /// Torque, N·m (McKibben only).
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        t: f64,
    },
    /// Inverse model over a stiffness × angle grid, written as CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "k-min")]
        k_min: f64,
        #[arg(long = "k-max")]
        k_max: f64,
        #[arg(long = "k-step")]
        k_step: f64,
        #[arg(long = "theta-max-deg")]
        theta_max_deg: f64,
        #[arg(long = "theta-step-deg")]
        theta_step_deg: f64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate grid points on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Real roots of x³ + a2 x² + a1 x + a0.
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        a2: f64,
        #[arg(long, allow_hyphen_values = true)]
        a1: f64,
        #[arg(long, allow_hyphen_values = true)]
        a0: f64,
    },
    /// Model-minus-measurement residuals over a force-curve CSV.
    Residuals {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// `key = value` model file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long = "r0-cm")]
    r0_cm: Option<f64>,
    #[arg(long = "l0-cm")]
    l0_cm: Option<f64>,
    #[arg(long = "alpha0-deg")]
    alpha0_deg: Option<f64>,
    /// Rational-model c, bar.
    #[arg(long, visible_alias = "c-bar", allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long = "d-bar", allow_hyphen_values = true)]
    d_bar: Option<f64>,
    #[arg(long = "e-bar2", allow_hyphen_values = true)]
    e_bar2: Option<f64>,
    #[arg(long = "R-cm")]
    r_cm: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long = "p-max-bar")]
    p_max_bar: Option<f64>,
    /// Any config key, e.g. `--set k_table_bar=3:1.6,5:1.31`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Args)]
struct MuscleState {
    #[arg(long)]
    eps: f64,
    #[arg(long = "p-bar")]
    p_bar: Option<f64>,
    /// Activation in [0, 1] (Hogan model).
    #[arg(long)]
    u: Option<f64>,
}

/// A fully validated command with all quantities in SI.
#[derive(Debug, Clone, PartialEq)]
pub enum CommandPlan {
    FitRational {
        config: ModelConfig,
        anchors: [ContractionAnchor; 2],
    },
    FitPolynomial {
        config: ModelConfig,
        anchors: Vec<ContractionAnchor>,
    },
    Force {
        config: ModelConfig,
        eps: f64,
        drive: f64,
    },
    Stiffness {
        config: ModelConfig,
        eps: f64,
        drive: f64,
    },
    ActuatorDirect {
        config: ModelConfig,
        theta: f64,
        drive: (f64, f64),
    },
    ActuatorInverse {
        config: ModelConfig,
        theta: f64,
        stiffness: f64,
        torque: f64,
    },
    Sweep {
        config: ModelConfig,
        stiffness: Grid,
        theta: Grid,
        out: Option<PathBuf>,
        execution: Execution,
    },
    Roots(CubicCoefficients),
    Residuals {
        config: ModelConfig,
        data: PathBuf,
    },
}

/// Failure to build a plan: either clap's usage error or a config problem.
#[derive(Debug)]
pub enum ParseFailure {
    Usage(clap::Error),
    Invalid(Error),
}

impl From<Error> for ParseFailure {
    fn from(e: Error) -> Self {
        ParseFailure::Invalid(e)
    }
}

fn usage(msg: String) -> ParseFailure {
    ParseFailure::Invalid(Error::Config(msg))
}

impl ModelArgs {
    fn resolve(&self) -> Result<ModelConfig> {
        let mut cfg = match &self.config {
            Some(path) => ModelConfig::load(path)?,
            None => ModelConfig::default(),
        };
        if let Some(m) = &self.model {
            cfg.model = Some(m.parse()?);
        }
        let set = |slot: &mut Option<f64>, v: Option<f64>, scale: f64| {
            if let Some(v) = v {
                *slot = Some(v * scale);
            }
        };
        set(&mut cfg.r0, self.r0_cm, cm(1.0));
        set(&mut cfg.l0, self.l0_cm, cm(1.0));
        if let Some(a) = self.alpha0_deg {
            cfg.alpha0 = Some(deg(a));
        }
        set(&mut cfg.c, self.c, bar(1.0));
        set(&mut cfg.d, self.d_bar, bar(1.0));
        set(&mut cfg.e, self.e_bar2, PA2_PER_BAR2);
        set(&mut cfg.pulley_radius, self.r_cm, cm(1.0));
        set(&mut cfg.eps0, self.eps0, 1.0);
        set(&mut cfg.p_max, self.p_max_bar, bar(1.0));
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

fn parse_anchor(text: &str) -> Result<ContractionAnchor> {
    let bad = || Error::Config(format!("--anchor expects `P_bar:eps_max`, got `{text}`"));
    let (p, e) = text.split_once(':').ok_or_else(bad)?;
    let p: f64 = p.trim().parse().map_err(|_| bad())?;
    let e: f64 = e.trim().parse().map_err(|_| bad())?;
    ContractionAnchor::new(bar(p), e)
}

fn drive_for(
    kind: ModelKind,
    p_bar: Option<f64>,
    u: Option<f64>,
    p_flag: &str,
    u_flag: &str,
) -> std::result::Result<f64, ParseFailure> {
    if kind.pressure_driven() {
        p_bar
            .map(bar)
            .ok_or_else(|| usage(format!("model `{kind}` needs --{p_flag}")))
    } else {
        u.ok_or_else(|| usage(format!("model `{kind}` needs --{u_flag}")))
    }
}

/// Parses `argv` (including the program name) into a validated plan.
pub fn parse_command<I, T>(argv: I) -> std::result::Result<CommandPlan, ParseFailure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(ParseFailure::Usage)?;
    Ok(match cli.command {
        Command::FitRational { model, anchors } => {
            let config = model.resolve()?;
            let parsed: Vec<_> = anchors
                .iter()
                .map(|a| parse_anchor(a))
                .collect::<Result<_>>()?;
            let anchors: [ContractionAnchor; 2] = parsed.try_into().map_err(|v: Vec<_>| {
                usage(format!(
                    "fit-rational needs exactly two --anchor flags, got {}",
                    v.len()
                ))
            })?;
            CommandPlan::FitRational { config, anchors }
        }
        Command::FitPolynomial { model, anchors } => CommandPlan::FitPolynomial {
            config: model.resolve()?,
            anchors: anchors
                .iter()
                .map(|a| parse_anchor(a))
                .collect::<Result<_>>()?,
        },
        Command::Force { model, state } => {
            let config = model.resolve()?;
            let drive = drive_for(config.kind(), state.p_bar, state.u, "p-bar", "u")?;
            CommandPlan::Force {
                config,
                eps: state.eps,
                drive,
            }
        }
        Command::Stiffness { model, state } => {
            let config = model.resolve()?;
            let drive = drive_for(config.kind(), state.p_bar, state.u, "p-bar", "u")?;
            CommandPlan::Stiffness {
                config,
                eps: state.eps,
                drive,
            }
        }
        Command::ActuatorDirect {
            model,
            theta_deg,
            p1_bar,
            p2_bar,
            u1,
            u2,
        } => {
            let config = model.resolve()?;
            let kind = config.kind();
            check_actuator_kind(kind, true)?;
            let d1 = drive_for(kind, p1_bar, u1, "p1-bar", "u1")?;
            let d2 = drive_for(kind, p2_bar, u2, "p2-bar", "u2")?;
            CommandPlan::ActuatorDirect {
                config,
                theta: deg(theta_deg),
                drive: (d1, d2),
            }
        }
        Command::ActuatorInverse {
            model,
            theta_deg,
            k,
            t,
        } => {
            let config = model.resolve()?;
            check_actuator_kind(config.kind(), true)?;
            if t != 0.0 && config.kind() != ModelKind::McKibben {
                return Err(usage(format!(
                    "--t is only supported for the mckibben model, not `{}`",
                    config.kind()
                )));
            }
            CommandPlan::ActuatorInverse {
                config,
                theta: deg(theta_deg),
                stiffness: k,
                torque: t,
            }
        }
        Command::Sweep {
            model,
            k_min,
            k_max,
            k_step,
            theta_max_deg,
            theta_step_deg,
            out,
            sequential,
        } => {
            let config = model.resolve()?;
            check_actuator_kind(config.kind(), false)?;
            CommandPlan::Sweep {
                config,
                stiffness: Grid::new(k_min, k_max, k_step)?,
                theta: Grid::new(deg(-theta_max_deg), deg(theta_max_deg), deg(theta_step_deg))?,
                out,
                execution: if sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
            }
        }
        Command::Roots { a2, a1, a0 } => CommandPlan::Roots(CubicCoefficients::new(a2, a1, a0)),
        Command::Residuals { model, data } => CommandPlan::Residuals {
            config: model.resolve()?,
            data,
        },
    })
}

fn check_actuator_kind(
    kind: ModelKind,
    allow_hogan: bool,
) -> std::result::Result<(), ParseFailure> {
    match kind {
        ModelKind::McKibben | ModelKind::Festo => Ok(()),
        ModelKind::Hogan if allow_hogan => Ok(()),
        other => Err(usage(format!(
            "no closed-form actuator model for `{other}` (use {}mckibben or festo)",
            if allow_hogan { "hogan, " } else { "" }
        ))),
    }
}

fn g9(x: f64) -> String {
    format_sig9(x)
}

fn report_inverse(out: &mut dyn Write, sol: &InverseSolution<PressurePair>) -> Result<()> {
    match sol.command {
        Some(pp) => {
            writeln!(out, "P1 = {} bar", g9(to_bar(pp.p1)))?;
            writeln!(out, "P2 = {} bar", g9(to_bar(pp.p2)))?;
            writeln!(out, "P1 - P2 = {} bar", g9(to_bar(pp.difference())))?;
            writeln!(out, "P1 + P2 = {} bar", g9(to_bar(pp.sum())))?;
        }
        None => writeln!(out, "no command")?,
    }
    writeln!(out, "feasible = {}", sol.feasibility)?;
    writeln!(out, "torque residual = {} N·m", g9(sol.torque_residual))?;
    writeln!(
        out,
        "stiffness residual = {} N·m/rad",
        g9(sol.stiffness_residual)
    )?;
    Ok(())
}

fn infeasible<C>(sol: &InverseSolution<C>, clipped: Option<PressurePair>) -> Result<()> {
    match sol.feasibility {
        Feasibility::Feasible => Ok(()),
        Feasibility::NoRealRoot => Err(Error::Infeasible("no real solution for the requested angle and stiffness".into())),
        Feasibility::ClippedInfeasible => Err(Error::Infeasible(match clipped {
            Some(c) => format!(
                "solution leaves the admissible region; nearest clipped command P1 = {} bar, P2 = {} bar",
                g9(to_bar(c.p1)),
                g9(to_bar(c.p2))
            ),
            None => "solution leaves the admissible region".into(),
        })),
    }
}

/// Executes a plan. Data goes to `out`, warnings to `diag`.
pub fn run(plan: &CommandPlan, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    match plan {
        CommandPlan::FitRational { config, anchors } => {
            let geometry = config.geometry()?;
            let p = fit_rational_params(anchors[0], anchors[1], config.c.unwrap_or(0.0), geometry)?;
            writeln!(out, "c = {} bar", g9(to_bar(p.c)))?;
            writeln!(out, "d = {} bar", g9(to_bar(p.d)))?;
            writeln!(out, "e = {} bar^2", g9(p.e / PA2_PER_BAR2))?;
            for a in anchors {
                writeln!(
                    out,
                    "eps_max({} bar) = {}",
                    g9(to_bar(a.pressure)),
                    g9(p.eps_max_at(a.pressure)?)
                )?;
            }
        }
        CommandPlan::FitPolynomial { config, anchors } => {
            let fit = fit_polynomial_coeffs(anchors, config.geometry()?)?;
            let coeffs: Vec<String> = fit.params.coeffs().iter().map(|&c| g9(to_bar(c))).collect();
            writeln!(out, "poly_coeffs_bar = {}", coeffs.join(", "))?;
            writeln!(out, "condition = {}", g9(fit.condition))?;
            if fit.wandering() {
                writeln!(
                    diag,
                    "warning: fitted shape function wanders between anchors ({} slope sign changes, more than {WANDERING_SLOPE_CHANGES}); consider fewer anchors",
                    fit.slope_sign_changes
                )?;
            }
        }
        CommandPlan::Force { config, eps, drive } => {
            let f = config.muscle()?.force(*eps, *drive)?;
            writeln!(out, "F = {} N", g9(f))?;
        }
        CommandPlan::Stiffness { config, eps, drive } => {
            let k = config.muscle()?.stiffness(*eps, *drive)?;
            writeln!(out, "dF/dl = {} N/m", g9(k))?;
        }
        CommandPlan::ActuatorDirect {
            config,
            theta,
            drive: (d1, d2),
        } => {
            let (ts, equilibrium) = match config.kind() {
                ModelKind::Hogan => {
                    let a = config.hogan_actuator()?;
                    let act = Activation::new(*d1, *d2);
                    (a.direct(act, *theta)?, a.equilibrium(act).ok())
                }
                ModelKind::McKibben => {
                    let a = config.mckibben_actuator()?;
                    let pp = PressurePair::new(*d1, *d2);
                    (a.direct(pp, *theta)?, None)
                }
                _ => {
                    let a = config.festo_actuator()?;
                    let pp = PressurePair::new(*d1, *d2);
                    (a.direct(pp, *theta)?, a.equilibrium(pp).ok())
                }
            };
            writeln!(out, "T = {} N·m", g9(ts.torque))?;
            writeln!(out, "K = {} N·m/rad", g9(ts.stiffness))?;
            if let Some(th) = equilibrium {
                writeln!(out, "theta_equ = {} deg", g9(th.to_degrees()))?;
            }
        }
        CommandPlan::ActuatorInverse {
            config,
            theta,
            stiffness,
            torque,
        } => match config.kind() {
            ModelKind::Hogan => {
                let sol = config.hogan_actuator()?.inverse(*theta, *stiffness)?;
                if let Some(a) = sol.command {
                    writeln!(out, "u1 = {}", g9(a.u1))?;
                    writeln!(out, "u2 = {}", g9(a.u2))?;
                }
                writeln!(out, "feasible = {}", sol.feasibility)?;
                infeasible(&sol, None)?;
            }
            ModelKind::McKibben => {
                let a = config.mckibben_actuator()?;
                let sol = a.inverse(*theta, *stiffness, *torque)?;
                report_inverse(out, &sol)?;
                infeasible(&sol, sol.clipped(&a.config))?;
            }
            _ => {
                let a = config.festo_actuator()?;
                let sol = a.inverse(*theta, *stiffness)?;
                report_inverse(out, &sol)?;
                infeasible(&sol, sol.clipped(&a.config))?;
            }
        },
        CommandPlan::Sweep {
            config,
            stiffness,
            theta,
            out: path,
            execution,
        } => {
            let table: SweepTable = match config.kind() {
                ModelKind::McKibben => sweep_inverse_with(
                    &config.mckibben_actuator()?,
                    *stiffness,
                    *theta,
                    *execution,
                )?,
                _ => sweep_inverse_with(&config.festo_actuator()?, *stiffness, *theta, *execution)?,
            };
            match path {
                Some(p) => write_sweep_csv(&table, p)?,
                None => write_sweep(&table, &mut *out)?,
            }
            let bad = table.iter().filter(|r| !r.solution.is_feasible()).count();
            if bad > 0 {
                writeln!(
                    diag,
                    "note: {bad} of {} grid points are not feasible",
                    table.len()
                )?;
            }
        }
        CommandPlan::Roots(c) => {
            let r = solve_cubic(*c)?;
            writeln!(out, "discriminant = {}", g9(r.discriminant))?;
            for x in &r.roots {
                writeln!(out, "{}", g9(*x))?;
            }
        }
        CommandPlan::Residuals { config, data } => {
            let ds = load_curve_csv(data)?;
            let report = residual_report(&config.muscle()?, &ds)?;
            writeln!(out, "pressure_bar,contraction_ratio,force_N,residual_N")?;
            for (s, r) in ds.samples.iter().zip(&report.residuals) {
                let res = r.residual.map(g9).unwrap_or_else(|| "NaN".into());
                writeln!(
                    out,
                    "{},{},{},{res}",
                    g9(to_bar(s.pressure)),
                    g9(s.eps),
                    g9(s.force)
                )?;
            }
            writeln!(
                diag,
                "model {}: rmse = {} N, max |r| = {} N",
                report.model,
                g9(report.rmse),
                g9(report.max_abs)
            )?;
            if report.out_of_domain > 0 {
                writeln!(
                    diag,
                    "{} samples lie outside the model's domain",
                    report.out_of_domain
                )?;
            }
        }
    }
    Ok(())
}

/// Process exit status for an error: 2 for domain and feasibility failures, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_domain() {
        2
    } else {
        1
    }
}

/// Full command-line entry point; returns the process exit status.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let plan = match parse_command(argv) {
        Ok(p) => p,
        Err(ParseFailure::Usage(e)) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(diag, "{text}")
            };
            return code;
        }
        Err(ParseFailure::Invalid(e)) => {
            let _ = writeln!(diag, "error: {e}");
            return exit_code(&e);
        }
    };
    match run(&plan, out, diag) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            exit_code(&e)
        }
    }
}
