//! Command-line driver: runs solvers on bundled or user problems, validates
//! schedules, and reproduces the benchmark figure data.
//!
//! Exit codes: 0 success, 1 configuration/parse error, 2 validation failure,
//! 3 divergence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use paravi::config::{IntegratorSpec, Mode, RunConfig, ScheduleSpec, VelocityMode};
use paravi::continuous::{
    self, IntegratorConfig, InitialVelocity, Method,
};
use paravi::diagnostics::{
    self, write_comparison_csv, write_run_csv, write_summary_json, write_trajectory_csv,
    MethodConfig, RunSummary,
};
use paravi::discrete::{self, RunOptions, StopReason, StopRule};
use paravi::model::point;
use paravi::validate::{
    validate_continuous, validate_discrete, ValidationReport, DEFAULT_CONTINUOUS_GRID,
    DEFAULT_CONTINUOUS_HORIZON, DEFAULT_DISCRETE_HORIZON,
};
use paravi::{Error, Point, ProblemInstance};

/// Environment variable overriding the output directory.
const OUT_DIR_ENV: &str = "PARAVI_OUT_DIR";

#[derive(Parser)]
#[command(name = "paravi", version, about = "Projection-type solvers for paramonotone variational inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a solver pipeline and write CSV/JSON artifacts.
    Run(RunArgs),
    /// Check a schedule against the admissibility conditions.
    Validate(ValidateArgs),
    /// Re-run the bundled benchmark configurations and emit one CSV per curve.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct ScheduleArgs {
    /// Schedule family: powerlawA | powerlawB | powerlawD | custom-continuous | custom-discrete
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long = "deltaP")]
    delta_p: Option<f64>,
    #[arg(long = "thetaP")]
    theta_p: Option<f64>,
    #[arg(long = "lambdaP")]
    lambda_p: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// CSV file with tabulated schedule values (custom families).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
}

impl ScheduleArgs {
    fn require(&self, name: &str, v: Option<f64>) -> Result<f64, Error> {
        v.ok_or_else(|| Error::Config(format!("missing required flag --{name} for this family")))
    }

    fn to_spec(&self) -> Result<Option<ScheduleSpec>, Error> {
        let family = match &self.family {
            None => return Ok(None),
            Some(f) => f.as_str(),
        };
        let spec = match family {
            "powerlawA" => ScheduleSpec::PowerLawA {
                h: self.require("h", self.h)?,
                s: self.require("s", self.s)?,
                p: self.require("p", self.p)?,
                q: self.require("q", self.q)?,
                t0: self.t0,
            },
            "powerlawB" => ScheduleSpec::PowerLawB {
                h: self.require("h", self.h)?,
                s: self.require("s", self.s)?,
                q: self.require("q", self.q)?,
                u: self.require("u", self.u)?,
                t0: self.t0,
            },
            "powerlawD" => ScheduleSpec::PowerLawD {
                p: self.require("p", self.p)?,
                q: self.require("q", self.q)?,
                delta: self.require("deltaP", self.delta_p)?,
                theta: self.require("thetaP", self.theta_p)?,
                lambda: self.require("lambdaP", self.lambda_p)?,
                omega: self.omega,
            },
            "custom-continuous" => ScheduleSpec::CustomContinuous {
                csv: self.csv.clone().ok_or_else(|| {
                    Error::Config("missing required flag --csv for custom schedules".into())
                })?,
                t0: self.t0,
            },
            "custom-discrete" => ScheduleSpec::CustomDiscrete {
                csv: self.csv.clone().ok_or_else(|| {
                    Error::Config("missing required flag --csv for custom schedules".into())
                })?,
            },
            other => {
                return Err(Error::Config(format!("family: unknown schedule family {other:?}")))
            }
        };
        Ok(Some(spec))
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags are ignored when present.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin problem id or path to a problem JSON file.
    #[arg(long)]
    problem: Option<String>,
    /// continuous-second-order | continuous-coupled | continuous-first-order |
    /// discrete-inertial | discrete-direct | compare | validate
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long = "t-end", default_value_t = 50.0)]
    t_end: f64,
    /// rk4 | euler
    #[arg(long, default_value = "rk4")]
    method: String,
    #[arg(long = "record-every", default_value_t = 100)]
    record_every: usize,
    /// quarter_convention | explicit
    #[arg(long = "velocity-mode", default_value = "quarter_convention")]
    velocity_mode: String,
    /// Comma-separated coordinates, e.g. --x0 1,0,0
    #[arg(long)]
    x0: Option<String>,
    #[arg(long)]
    x1: Option<String>,
    #[arg(long)]
    v0: Option<String>,
    /// Discrete starting points (aliases of --x0/--x1).
    #[arg(long)]
    z0: Option<String>,
    #[arg(long)]
    z1: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long = "max-iters", default_value_t = 1_000_000)]
    max_iters: u64,
    #[arg(long = "stagnation-tol", default_value_t = 0.0)]
    stagnation_tol: f64,
    #[arg(long = "stagnation-window", default_value_t = 10)]
    stagnation_window: u64,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run even if the schedule fails validation (or cannot be validated).
    #[arg(long = "allow-unvalidated", default_value_t = false)]
    allow_unvalidated: bool,
    /// Permit eta(n) > 0 in custom discrete schedules.
    #[arg(long = "allow-positive-eta", default_value_t = false)]
    allow_positive_eta: bool,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    q1: Option<f64>,
    #[arg(long)]
    q2: Option<f64>,
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig, Error> {
        if let Some(path) = &self.config {
            return RunConfig::from_json_path(path);
        }
        let problem = self
            .problem
            .clone()
            .ok_or_else(|| Error::Config("missing required flag --problem".into()))?;
        let mode_str = self
            .mode
            .clone()
            .ok_or_else(|| Error::Config("missing required flag --mode".into()))?;
        let mode: Mode = serde_json::from_value(serde_json::Value::String(mode_str.clone()))
            .map_err(|_| Error::Config(format!("mode: unknown mode {mode_str:?}")))?;
        let method: Method = serde_json::from_value(serde_json::Value::String(self.method.clone()))
            .map_err(|_| Error::Config(format!("method: unknown method {:?}", self.method)))?;
        let velocity_mode: VelocityMode =
            serde_json::from_value(serde_json::Value::String(self.velocity_mode.clone()))
                .map_err(|_| {
                    Error::Config(format!(
                        "velocity-mode: unknown value {:?}",
                        self.velocity_mode
                    ))
                })?;
        Ok(RunConfig {
            problem,
            mode,
            schedule: self.schedule.to_spec()?,
            integrator: IntegratorSpec {
                method,
                step: self.step,
                t_end: self.t_end,
                record_every: self.record_every,
                velocity_mode,
            },
            stop: StopRule {
                residual_tol: self.tol,
                max_iters: self.max_iters,
                stagnation_tol: self.stagnation_tol,
                stagnation_window: self.stagnation_window,
            },
            x0: parse_vec_opt(self.x0.as_deref().or(self.z0.as_deref()), "x0")?,
            x1: parse_vec_opt(self.x1.as_deref().or(self.z1.as_deref()), "x1")?,
            v0: parse_vec_opt(self.v0.as_deref(), "v0")?,
            tau: self.tau,
            out_dir: self.out_dir.clone(),
            seed: self.seed,
            allow_unvalidated: self.allow_unvalidated,
            allow_positive_eta: self.allow_positive_eta,
            c1: self.c1,
            c2: self.c2,
            q1: self.q1,
            q2: self.q2,
            compare_grid: vec![],
        })
    }
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    q1: Option<f64>,
    #[arg(long)]
    q2: Option<f64>,
    /// Continuous horizon (t units past t0) or discrete horizon (iterations).
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_CONTINUOUS_GRID)]
    grid: usize,
}

#[derive(Args)]
struct ReproduceArgs {
    /// fig1 | fig2 | fig3
    figure: String,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    /// Iteration budget for the discrete curves.
    #[arg(long = "max-iters", default_value_t = 100_000)]
    max_iters: u64,
    /// Horizon for the continuous curves.
    #[arg(long = "t-end", default_value_t = 50.0)]
    t_end: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_vec(text: &str, key: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: bad number {f:?}")))
        })
        .collect()
}

fn parse_vec_opt(text: Option<&str>, key: &str) -> Result<Option<Vec<f64>>, Error> {
    text.map(|t| parse_vec(t, key)).transpose()
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parameter(_) | Error::ConditionFailed { .. } => 2,
        Error::Divergence { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2; config parse errors are exit 1 here.
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::Reproduce(args) => cmd_reproduce(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn resolve_out_dir(requested: Option<&Path>) -> Result<PathBuf, Error> {
    let dir = match std::env::var_os(OUT_DIR_ENV) {
        Some(env_dir) => PathBuf::from(env_dir),
        None => requested.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("out")),
    };
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn vec_to_point(v: &[f64]) -> Point {
    point(v)
}

/// Validate the schedule for a run; `Ok(None)` means validated (or skipped
/// by override), `Ok(Some(report))` is an unsatisfied report.
fn preflight_validation(cfg: &RunConfig) -> Result<Option<ValidationReport>, Error> {
    if cfg.allow_unvalidated {
        return Ok(None);
    }
    let Some(spec) = &cfg.schedule else { return Ok(None) };
    let report = match spec {
        ScheduleSpec::PowerLawA { .. } | ScheduleSpec::PowerLawB { .. } => {
            let sched = spec.build_continuous()?;
            let (c1, c2) = sched.family_constants().expect("family schedule");
            validate_continuous(
                &sched,
                c1,
                c2,
                sched.t0() + DEFAULT_CONTINUOUS_HORIZON,
                DEFAULT_CONTINUOUS_GRID,
            )?
        }
        ScheduleSpec::CustomContinuous { .. } => {
            let sched = spec.build_continuous()?;
            let (c1, c2) = match (cfg.c1, cfg.c2) {
                (Some(c1), Some(c2)) => (c1, c2),
                _ => {
                    return Err(Error::Parameter(
                        "custom continuous schedules need --c1 and --c2 to validate \
                         (or --allow-unvalidated)"
                            .into(),
                    ))
                }
            };
            validate_continuous(
                &sched,
                c1,
                c2,
                sched.t0() + DEFAULT_CONTINUOUS_HORIZON,
                DEFAULT_CONTINUOUS_GRID,
            )?
        }
        ScheduleSpec::PowerLawD { .. } => {
            let sched = spec.build_discrete()?;
            let q = sched.family_constants().expect("family schedule");
            validate_discrete(&sched, q.q1, q.q2, DEFAULT_DISCRETE_HORIZON)?
        }
        ScheduleSpec::CustomDiscrete { .. } => {
            let sched = spec.build_discrete()?;
            let (q1, q2) = match (cfg.q1, cfg.q2) {
                (Some(q1), Some(q2)) => (q1, q2),
                _ => {
                    return Err(Error::Parameter(
                        "custom discrete schedules need --q1 and --q2 to validate \
                         (or --allow-unvalidated)"
                            .into(),
                    ))
                }
            };
            validate_discrete(&sched, q1, q2, DEFAULT_DISCRETE_HORIZON)?
        }
    };
    Ok((!report.satisfied).then_some(report))
}

fn stop_reason_str(reason: StopReason) -> &'static str {
    match reason {
        StopReason::Tol => "tol",
        StopReason::MaxIters => "max_iters",
        StopReason::Stagnation => "stagnation",
    }
}

fn cmd_run(args: &RunArgs) -> Result<ExitCode, Error> {
    let cfg = args.to_config()?;
    let prob = cfg.load_problem()?;
    let out_dir = resolve_out_dir(cfg.out_dir.as_deref())?;

    if cfg.mode == Mode::Validate {
        let report = match &cfg.schedule {
            Some(spec) if spec.is_continuous() => {
                let sched = spec.build_continuous()?;
                let (c1, c2) = sched
                    .family_constants()
                    .or(cfg.c1.zip(cfg.c2))
                    .ok_or_else(|| {
                        Error::Parameter("custom schedules need --c1/--c2".into())
                    })?;
                validate_continuous(
                    &sched,
                    c1,
                    c2,
                    sched.t0() + DEFAULT_CONTINUOUS_HORIZON,
                    DEFAULT_CONTINUOUS_GRID,
                )?
            }
            Some(spec) => {
                let sched = spec.build_discrete()?;
                let (q1, q2) = match sched.family_constants() {
                    Ok(q) => (q.q1, q.q2),
                    Err(_) => cfg.q1.zip(cfg.q2).ok_or_else(|| {
                        Error::Parameter("custom schedules need --q1/--q2".into())
                    })?,
                };
                validate_discrete(&sched, q1, q2, DEFAULT_DISCRETE_HORIZON)?
            }
            None => return Err(Error::Config("mode validate needs --family".into())),
        };
        print!("{}", report.render());
        return Ok(if report.satisfied { ExitCode::SUCCESS } else { ExitCode::from(2) });
    }

    if let Some(report) = preflight_validation(&cfg)? {
        eprint!("{}", report.render());
        eprintln!("schedule failed validation; pass --allow-unvalidated to run anyway");
        return Ok(ExitCode::from(2));
    }

    let echo = cfg.config_echo();
    let dim = prob.dimension();
    let mode = cfg.mode;
    let icfg = IntegratorConfig {
        step: cfg.integrator.step,
        t_end: cfg.integrator.t_end,
        method: cfg.integrator.method,
        record_every: cfg.integrator.record_every,
    };

    match mode {
        Mode::ContinuousSecondOrder | Mode::ContinuousCoupled | Mode::ContinuousFirstOrder => {
            let traj = run_continuous(&cfg, &prob, &icfg)?;
            let csv_path = out_dir.join("trajectory.csv");
            write_trajectory_csv(&traj, &csv_path)?;
            let last = traj.last();
            let summary = RunSummary {
                mode: mode.as_str().into(),
                stop_reason: "t_end".into(),
                final_residual: last.residual,
                iterations: (traj.samples.len() - 1) as u64,
                config: echo,
                warnings: traj.warnings.clone(),
            };
            write_summary_json(&summary, out_dir.join("summary.json"))?;
            println!(
                "wrote {} ({} samples, final residual {:.6e})",
                csv_path.display(),
                traj.samples.len(),
                last.residual
            );
            Ok(ExitCode::SUCCESS)
        }
        Mode::DiscreteInertial | Mode::DiscreteDirect => {
            let run = run_discrete(&cfg, &prob)?;
            let csv_path = out_dir.join("iterates.csv");
            write_run_csv(&run, dim, &csv_path)?;
            let summary = RunSummary {
                mode: mode.as_str().into(),
                stop_reason: stop_reason_str(run.stop_reason).into(),
                final_residual: run.final_residual,
                iterations: run.iterations,
                config: echo,
                warnings: vec![],
            };
            write_summary_json(&summary, out_dir.join("summary.json"))?;
            println!(
                "wrote {} (stopped: {}, n={}, residual {:.6e})",
                csv_path.display(),
                stop_reason_str(run.stop_reason),
                run.iterations,
                run.final_residual
            );
            Ok(ExitCode::SUCCESS)
        }
        Mode::Compare => {
            let table = run_compare(&cfg, &prob)?;
            let csv_path = out_dir.join("comparison.csv");
            write_comparison_csv(&table, &csv_path)?;
            println!("wrote {}", csv_path.display());
            for row in &table.rows {
                let iters = row
                    .iterations_to_tol
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "not-reached".into());
                println!("  {:<9} {:<60} iters_to_tol={iters}", row.method, row.schedule);
            }
            Ok(ExitCode::SUCCESS)
        }
        Mode::Validate => unreachable!("handled above"),
    }
}

fn run_continuous(
    cfg: &RunConfig,
    prob: &ProblemInstance,
    icfg: &IntegratorConfig,
) -> Result<continuous::ContinuousTrajectory, Error> {
    // The counterexample instance pins the constant-target flow.
    if cfg.problem == "remark-counterexample" && cfg.mode == Mode::ContinuousSecondOrder {
        return continuous::integrate_remark(icfg);
    }
    let defaults_x0 = [1.0, 0.0, 0.0];
    let x0 = vec_to_point(cfg.x0.as_deref().unwrap_or(&defaults_x0));
    match cfg.mode {
        Mode::ContinuousSecondOrder => {
            let sched = cfg
                .schedule
                .as_ref()
                .ok_or_else(|| Error::Config("continuous modes need a schedule".into()))?
                .build_continuous()?;
            let init = match cfg.integrator.velocity_mode {
                VelocityMode::QuarterConvention => {
                    let x1 = cfg.x1.as_ref().ok_or_else(|| {
                        Error::Config("quarter_convention needs --x1".into())
                    })?;
                    InitialVelocity::QuarterConvention { x1: vec_to_point(x1) }
                }
                VelocityMode::Explicit => {
                    let v0 = cfg
                        .v0
                        .as_ref()
                        .ok_or_else(|| Error::Config("velocity-mode explicit needs --v0".into()))?;
                    InitialVelocity::Explicit { v0: vec_to_point(v0) }
                }
            };
            continuous::integrate_second_order(prob, &sched, &x0, &init, icfg)
        }
        Mode::ContinuousCoupled => {
            let sched = cfg
                .schedule
                .as_ref()
                .ok_or_else(|| Error::Config("continuous modes need a schedule".into()))?
                .build_continuous()?;
            let x1 = cfg
                .x1
                .as_ref()
                .ok_or_else(|| Error::Config("continuous-coupled needs --x1".into()))?;
            continuous::integrate_coupled_feasible(prob, &sched, &x0, &vec_to_point(x1), icfg)
        }
        Mode::ContinuousFirstOrder => {
            let sched = cfg
                .schedule
                .as_ref()
                .ok_or_else(|| Error::Config("continuous modes need a schedule".into()))?
                .build_continuous()?;
            continuous::integrate_first_order(prob, &sched, &x0, icfg)
        }
        _ => unreachable!(),
    }
}

fn run_discrete(cfg: &RunConfig, prob: &ProblemInstance) -> Result<discrete::RunResult, Error> {
    let defaults_z0 = [1.0, 0.0, 0.0];
    let defaults_z1 = [0.0, 1.0, 0.0];
    let z0 = vec_to_point(cfg.x0.as_deref().unwrap_or(&defaults_z0));
    let opts = RunOptions {
        allow_positive_eta: cfg.allow_positive_eta,
        ..Default::default()
    };
    match cfg.mode {
        Mode::DiscreteInertial => {
            let sched = cfg
                .schedule
                .as_ref()
                .ok_or_else(|| Error::Config("discrete-inertial needs a schedule".into()))?
                .build_discrete()?;
            let z1 = vec_to_point(cfg.x1.as_deref().unwrap_or(&defaults_z1));
            discrete::run_inertial_with(prob, &sched, &z0, &z1, &cfg.stop, &opts)
        }
        Mode::DiscreteDirect => {
            let tau = cfg.tau.unwrap_or(0.75);
            discrete::run_direct_method_with(prob, tau, &z0, &cfg.stop, &opts)
        }
        _ => unreachable!(),
    }
}

/// The benchmark comparison grid: `p = q = 0.5` fixed, `(deltaP, thetaP,
/// lambdaP)` varied. These are the artifact's documented defaults.
const FIG3_GRID: [(f64, f64, f64); 4] =
    [(1.0, 1.0, 0.5), (2.0, 1.0, 0.5), (1.0, 2.0, 1.0), (0.5, 0.5, 0.5)];

fn run_compare(
    cfg: &RunConfig,
    prob: &ProblemInstance,
) -> Result<diagnostics::ComparisonTable, Error> {
    let z0 = vec_to_point(cfg.x0.as_deref().unwrap_or(&[1.0, 0.0, 0.0]));
    let z1 = vec_to_point(cfg.x1.as_deref().unwrap_or(&[0.0, 1.0, 0.0]));
    let grid: Vec<(f64, f64, f64)> = if cfg.compare_grid.is_empty() {
        FIG3_GRID.to_vec()
    } else {
        cfg.compare_grid.clone()
    };
    let mut configs = Vec::new();
    for (delta, theta, lambda) in grid {
        configs.push(MethodConfig::Inertial {
            schedule: paravi::DiscreteSchedule::power_law_d(0.5, 0.5, delta, theta, lambda, None)?,
            z0: z0.clone(),
            z1: z1.clone(),
        });
    }
    configs.push(MethodConfig::Direct { tau: cfg.tau.unwrap_or(0.75), z0 });
    diagnostics::compare_methods(prob, &configs, &cfg.stop)
}

fn cmd_validate(args: &ValidateArgs) -> Result<ExitCode, Error> {
    let spec = args
        .schedule
        .to_spec()?
        .ok_or_else(|| Error::Config("missing required flag --family".into()))?;
    let report = if spec.is_continuous() {
        let sched = spec.build_continuous()?;
        let (c1, c2) = sched
            .family_constants()
            .or(args.c1.zip(args.c2))
            .ok_or_else(|| Error::Parameter("custom schedules need --c1/--c2".into()))?;
        let horizon = sched.t0() + args.horizon.unwrap_or(DEFAULT_CONTINUOUS_HORIZON);
        validate_continuous(&sched, c1, c2, horizon, args.grid)?
    } else {
        let sched = spec.build_discrete()?;
        let (q1, q2) = match sched.family_constants() {
            Ok(q) => (q.q1, q.q2),
            Err(_) => args
                .q1
                .zip(args.q2)
                .ok_or_else(|| Error::Parameter("custom schedules need --q1/--q2".into()))?,
        };
        let horizon = args.horizon.unwrap_or(DEFAULT_DISCRETE_HORIZON as f64) as u64;
        validate_discrete(&sched, q1, q2, horizon)?
    };
    print!("{}", report.render());
    Ok(if report.satisfied { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    config: serde_json::Value,
}

#[derive(Serialize)]
struct Manifest {
    figure: String,
    seed: u64,
    note: String,
    files: Vec<ManifestEntry>,
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<ExitCode, Error> {
    let out_dir = resolve_out_dir(args.out_dir.as_deref())?;
    let mut files = Vec::new();
    let prob = paravi::problems::paper_sec5();
    let x0 = point(&[1.0, 0.0, 0.0]);
    let z1 = point(&[0.0, 1.0, 0.0]);

    match args.figure.as_str() {
        "fig1" => {
            // Continuous second-order flow, powerlawB with u=1, s=0.35,
            // q=0.71, h varied; the explicit §-style start.
            for h in [2.5, 3.0, 4.0] {
                let sched = paravi::ContinuousSchedule::power_law_b(h, 0.35, 0.71, 1.0, 0.0)?;
                let cfg = IntegratorConfig::new(1e-3, args.t_end).with_record_every(100);
                let traj = continuous::integrate_second_order(
                    &prob,
                    &sched,
                    &x0,
                    &InitialVelocity::Explicit { v0: point(&[-0.75, 0.75, 0.0]) },
                    &cfg,
                )?;
                let name = format!("fig1_h{h}.csv");
                write_trajectory_csv(&traj, out_dir.join(&name))?;
                files.push(ManifestEntry {
                    path: name,
                    config: serde_json::json!({
                        "mode": "continuous-second-order",
                        "family": "powerlawB", "h": h, "s": 0.35, "q": 0.71, "u": 1.0,
                        "x0": [1.0, 0.0, 0.0], "v0": [-0.75, 0.75, 0.0],
                        "step": 1e-3, "t_end": args.t_end,
                    }),
                });
            }
        }
        "fig2" => {
            // Inertial iteration, powerlawD over a documented default grid.
            let grid = [
                (0.5, 0.5, 1.0, 1.0, 0.5),
                (0.5, 0.3, 1.0, 1.0, 0.5),
                (0.3, 0.6, 1.0, 1.0, 0.5),
                (0.7, 0.25, 2.0, 1.0, 1.0),
            ];
            for (p, q, delta, theta, lambda) in grid {
                let sched =
                    paravi::DiscreteSchedule::power_law_d(p, q, delta, theta, lambda, None)?;
                let stop = StopRule::tol(0.0, args.max_iters);
                let run = discrete::run_inertial(&prob, &sched, &x0, &z1, &stop)?;
                let name = format!("fig2_p{p}_q{q}_d{delta}_t{theta}_l{lambda}.csv");
                write_run_csv(&run, prob.dimension(), out_dir.join(&name))?;
                files.push(ManifestEntry {
                    path: name,
                    config: serde_json::json!({
                        "mode": "discrete-inertial",
                        "family": "powerlawD", "p": p, "q": q,
                        "deltaP": delta, "thetaP": theta, "lambdaP": lambda,
                        "z0": [1.0, 0.0, 0.0], "z1": [0.0, 1.0, 0.0],
                        "max_iters": args.max_iters,
                    }),
                });
            }
        }
        "fig3" => {
            // Inertial (p = q = 0.5, varied deltaP/thetaP/lambdaP) against
            // the direct method, same start and same iteration budget.
            let stop = StopRule::tol(0.0, args.max_iters);
            for (delta, theta, lambda) in FIG3_GRID {
                let sched =
                    paravi::DiscreteSchedule::power_law_d(0.5, 0.5, delta, theta, lambda, None)?;
                let run = discrete::run_inertial(&prob, &sched, &x0, &z1, &stop)?;
                let name = format!("fig3_inertial_d{delta}_t{theta}_l{lambda}.csv");
                write_run_csv(&run, prob.dimension(), out_dir.join(&name))?;
                files.push(ManifestEntry {
                    path: name,
                    config: serde_json::json!({
                        "mode": "discrete-inertial",
                        "family": "powerlawD", "p": 0.5, "q": 0.5,
                        "deltaP": delta, "thetaP": theta, "lambdaP": lambda,
                        "z0": [1.0, 0.0, 0.0], "z1": [0.0, 1.0, 0.0],
                        "max_iters": args.max_iters,
                    }),
                });
            }
            let run = discrete::run_direct_method(&prob, 0.75, &x0, &stop)?;
            let name = "fig3_direct_tau0.75.csv".to_string();
            write_run_csv(&run, prob.dimension(), out_dir.join(&name))?;
            files.push(ManifestEntry {
                path: name,
                config: serde_json::json!({
                    "mode": "discrete-direct", "tau": 0.75,
                    "z0": [1.0, 0.0, 0.0], "max_iters": args.max_iters,
                }),
            });
        }
        other => {
            eprintln!("error: unknown figure id {other:?} (expected fig1, fig2 or fig3)");
            return Ok(ExitCode::from(1));
        }
    }

    let manifest = Manifest {
        figure: args.figure.clone(),
        seed: args.seed,
        note: "grids are the artifact's documented defaults".into(),
        files,
    };
    let path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}
