//! Run configuration shared by the CLI flags and the JSON config file.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::continuous::Method;
use crate::discrete::StopRule;
use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::problems;
use crate::schedule::{ContinuousSchedule, DiscreteSchedule, ScheduleTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ContinuousSecondOrder,
    ContinuousCoupled,
    ContinuousFirstOrder,
    DiscreteInertial,
    DiscreteDirect,
    Compare,
    Validate,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::ContinuousSecondOrder => "continuous-second-order",
            Mode::ContinuousCoupled => "continuous-coupled",
            Mode::ContinuousFirstOrder => "continuous-first-order",
            Mode::DiscreteInertial => "discrete-inertial",
            Mode::DiscreteDirect => "discrete-direct",
            Mode::Compare => "compare",
            Mode::Validate => "validate",
        }
    }
}

/// Schedule description: a family with parameters, or tabulated values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ScheduleSpec {
    #[serde(rename = "powerlawA")]
    PowerLawA {
        h: f64,
        s: f64,
        p: f64,
        q: f64,
        #[serde(default)]
        t0: f64,
    },
    #[serde(rename = "powerlawB")]
    PowerLawB {
        h: f64,
        s: f64,
        q: f64,
        u: f64,
        #[serde(default)]
        t0: f64,
    },
    #[serde(rename = "powerlawD")]
    PowerLawD {
        p: f64,
        q: f64,
        #[serde(rename = "deltaP")]
        delta: f64,
        #[serde(rename = "thetaP")]
        theta: f64,
        #[serde(rename = "lambdaP")]
        lambda: f64,
        #[serde(default)]
        omega: Option<f64>,
    },
    #[serde(rename = "custom-continuous")]
    CustomContinuous {
        csv: PathBuf,
        #[serde(default)]
        t0: f64,
    },
    #[serde(rename = "custom-discrete")]
    CustomDiscrete { csv: PathBuf },
}

impl ScheduleSpec {
    pub fn build_continuous(&self) -> Result<ContinuousSchedule> {
        match self {
            ScheduleSpec::PowerLawA { h, s, p, q, t0 } => {
                ContinuousSchedule::power_law_a(*h, *s, *p, *q, *t0)
            }
            ScheduleSpec::PowerLawB { h, s, q, u, t0 } => {
                ContinuousSchedule::power_law_b(*h, *s, *q, *u, *t0)
            }
            ScheduleSpec::CustomContinuous { csv, t0 } => {
                Ok(ContinuousSchedule::from_table(ScheduleTable::from_csv_path(csv)?, *t0))
            }
            other => Err(Error::Config(format!(
                "schedule family {} is not a continuous schedule",
                other.family_name()
            ))),
        }
    }

    pub fn build_discrete(&self) -> Result<DiscreteSchedule> {
        match self {
            ScheduleSpec::PowerLawD { p, q, delta, theta, lambda, omega } => {
                DiscreteSchedule::power_law_d(*p, *q, *delta, *theta, *lambda, *omega)
            }
            ScheduleSpec::CustomDiscrete { csv } => {
                Ok(DiscreteSchedule::from_table(ScheduleTable::from_csv_path(csv)?))
            }
            other => Err(Error::Config(format!(
                "schedule family {} is not a discrete schedule",
                other.family_name()
            ))),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            ScheduleSpec::PowerLawA { .. } => "powerlawA",
            ScheduleSpec::PowerLawB { .. } => "powerlawB",
            ScheduleSpec::PowerLawD { .. } => "powerlawD",
            ScheduleSpec::CustomContinuous { .. } => "custom-continuous",
            ScheduleSpec::CustomDiscrete { .. } => "custom-discrete",
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(
            self,
            ScheduleSpec::PowerLawA { .. }
                | ScheduleSpec::PowerLawB { .. }
                | ScheduleSpec::CustomContinuous { .. }
        )
    }
}

fn default_step() -> f64 {
    1e-3
}

fn default_t_end() -> f64 {
    50.0
}

fn default_record_every() -> usize {
    100
}

fn default_method() -> Method {
    Method::Rk4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityMode {
    QuarterConvention,
    Explicit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorSpec {
    pub method: Method,
    pub step: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub velocity_mode: VelocityMode,
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        IntegratorSpec {
            method: default_method(),
            step: default_step(),
            t_end: default_t_end(),
            record_every: default_record_every(),
            velocity_mode: VelocityMode::QuarterConvention,
        }
    }
}

/// A full experiment description, loadable from JSON or assembled from flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    /// Builtin id (`paper-sec5`, `remark-counterexample`, `identity-ball`)
    /// or a path to a problem JSON file.
    pub problem: String,
    pub mode: Mode,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub stop: StopRule,
    /// Continuous initial position / discrete `z(0)`.
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    /// Second point: `x1` of the quarter convention / discrete `z(1)`.
    #[serde(default)]
    pub x1: Option<Vec<f64>>,
    /// Explicit initial velocity (`velocity_mode = explicit`).
    #[serde(default)]
    pub v0: Option<Vec<f64>>,
    /// Direct-method exponent.
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Skip schedule validation before solving.
    #[serde(default)]
    pub allow_unvalidated: bool,
    /// Allow `η(n) > 0` in custom discrete schedules.
    #[serde(default)]
    pub allow_positive_eta: bool,
    /// Margin constants for validating custom continuous schedules.
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub c2: Option<f64>,
    /// Contraction constants for validating custom discrete schedules.
    #[serde(default)]
    pub q1: Option<f64>,
    #[serde(default)]
    pub q2: Option<f64>,
    /// Extra inertial settings (`deltaP`,`thetaP`,`lambdaP` triples) for
    /// `compare` mode; the built-in grid is used when empty.
    #[serde(default)]
    pub compare_grid: Vec<(f64, f64, f64)>,
}

impl RunConfig {
    pub fn from_json_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Resolve `problem` to a bundled instance or a JSON file on disk.
    pub fn load_problem(&self) -> Result<ProblemInstance> {
        if let Some(p) = problems::by_id(&self.problem) {
            return Ok(p);
        }
        let path = PathBuf::from(&self.problem);
        if path.exists() {
            return ProblemInstance::from_json_path(&path);
        }
        Err(Error::Config(format!(
            "problem: unknown builtin id and no such file: {} (builtins: {})",
            self.problem,
            problems::BUILTIN_IDS.join(", ")
        )))
    }

    pub fn config_echo(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}
