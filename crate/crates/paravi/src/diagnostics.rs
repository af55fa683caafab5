//! Energy series, CSV/JSON output, and side-by-side method comparison.
//!
//! CSV science columns are written with 17 significant digits so that every
//! double round-trips exactly; identical configs therefore produce
//! byte-identical files. Wall-clock time appears only in the comparison
//! table and is excluded from determinism guarantees.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::continuous::ContinuousTrajectory;
use crate::discrete::{self, RunResult, StopReason, StopRule};
use crate::error::{Error, Result};
use crate::model::{Point, ProblemInstance};
use crate::schedule::DiscreteSchedule;

/// Format a double with 17 significant digits (round-trip exact).
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Energy series recorded along a run. The underlying inequalities of the
/// convergence analysis are deliberately not asserted; these are diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EnergyDiagnostics {
    /// `½‖x − x*‖²` against the supplied reference point.
    pub v_ref: Option<Vec<(f64, f64)>>,
    /// `½‖x′‖²` (continuous runs).
    pub b: Option<Vec<(f64, f64)>>,
    /// `‖z(n+1) − z(n)‖²` (discrete runs; needs consecutively logged pairs).
    pub a: Option<Vec<(u64, f64)>>,
    /// `‖z(n) − z(n−1)‖²` (discrete runs).
    pub c: Option<Vec<(u64, f64)>>,
}

/// Energy series of a continuous trajectory; `v_ref` requires a reference.
pub fn energy_from_trajectory(
    traj: &ContinuousTrajectory,
    reference: Option<&Point>,
) -> Result<EnergyDiagnostics> {
    let v_ref = match reference {
        Some(r) => {
            if r.len() != traj.dim {
                return Err(Error::DimensionMismatch { expected: traj.dim, got: r.len() });
            }
            Some(
                traj.samples
                    .iter()
                    .map(|s| (s.t, 0.5 * (&s.x - r).norm_squared()))
                    .collect(),
            )
        }
        None => None,
    };
    let b = traj.samples.iter().map(|s| (s.t, 0.5 * s.speed * s.speed)).collect();
    Ok(EnergyDiagnostics { v_ref, b: Some(b), ..Default::default() })
}

/// Energy series of a discrete run. `c` comes from the logged step norms;
/// `a(n)` is emitted for logged pairs with consecutive indices.
pub fn energy_from_run(run: &RunResult, reference: Option<&Point>) -> Result<EnergyDiagnostics> {
    let v_ref = match reference {
        Some(r) => Some(
            run.samples
                .iter()
                .map(|s| {
                    if r.len() == s.z.len() {
                        Ok((s.n as f64, 0.5 * (&s.z - r).norm_squared()))
                    } else {
                        Err(Error::DimensionMismatch { expected: s.z.len(), got: r.len() })
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let c = run.samples.iter().map(|s| (s.n, s.step_norm * s.step_norm)).collect();
    let a = run
        .samples
        .windows(2)
        .filter(|w| w[1].n == w[0].n + 1)
        .map(|w| (w[0].n, (&w[1].z - &w[0].z).norm_squared()))
        .collect();
    Ok(EnergyDiagnostics { v_ref, b: None, a: Some(a), c: Some(c) })
}

fn open_writer(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

/// Columns: `t, x_1..x_d, residual, feas_violation, speed`.
pub fn write_trajectory_csv(traj: &ContinuousTrajectory, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = open_writer(path)?;
    let io_err = |e: std::io::Error| Error::io(path, e);
    let mut header = String::from("t");
    for i in 1..=traj.dim {
        header.push_str(&format!(",x_{i}"));
    }
    header.push_str(",residual,feas_violation,speed");
    writeln!(w, "{header}").map_err(io_err)?;
    for s in &traj.samples {
        let mut line = format_float(s.t);
        for v in s.x.iter() {
            line.push(',');
            line.push_str(&format_float(*v));
        }
        for v in [s.residual, s.feas_violation, s.speed] {
            line.push(',');
            line.push_str(&format_float(v));
        }
        writeln!(w, "{line}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Columns: `n, z_1..z_d, residual, feas_violation, step_norm`.
pub fn write_run_csv(run: &RunResult, dim: usize, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = open_writer(path)?;
    let io_err = |e: std::io::Error| Error::io(path, e);
    let mut header = String::from("n");
    for i in 1..=dim {
        header.push_str(&format!(",z_{i}"));
    }
    header.push_str(",residual,feas_violation,step_norm");
    writeln!(w, "{header}").map_err(io_err)?;
    for s in &run.samples {
        let mut line = s.n.to_string();
        for v in s.z.iter() {
            line.push(',');
            line.push_str(&format_float(*v));
        }
        for v in [s.residual, s.feas_violation, s.step_norm] {
            line.push(',');
            line.push_str(&format_float(v));
        }
        writeln!(w, "{line}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Summary of a finished run, also written as `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub mode: String,
    pub stop_reason: String,
    pub final_residual: f64,
    pub iterations: u64,
    /// Echo of the configuration that produced the run.
    pub config: serde_json::Value,
    #[serde(default)]
    pub warnings: Vec<String>,
}

pub fn write_summary_json(summary: &RunSummary, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = open_writer(path)?;
    serde_json::to_writer_pretty(&mut w, summary)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_summary_json(path: impl AsRef<Path>) -> Result<RunSummary> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// One method configuration for [`compare_methods`].
#[derive(Clone, Debug)]
pub enum MethodConfig {
    Inertial { schedule: DiscreteSchedule, z0: Point, z1: Point },
    Direct { tau: f64, z0: Point },
}

impl MethodConfig {
    fn method_name(&self) -> &'static str {
        match self {
            MethodConfig::Inertial { .. } => "inertial",
            MethodConfig::Direct { .. } => "direct",
        }
    }

    fn schedule_label(&self) -> String {
        match self {
            MethodConfig::Inertial { schedule, .. } => schedule.family_label(),
            MethodConfig::Direct { tau, .. } => format!("beta0(n)=1/n^{tau}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub method: String,
    pub schedule: String,
    /// `None` when the tolerance was not reached within the budget.
    pub iterations_to_tol: Option<u64>,
    pub final_residual: f64,
    pub wall_ms: f64,
    /// Row-level failure (the table is still produced).
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

/// Run every configuration against the same problem and stop rule and record
/// iterations-to-tolerance plus wall time per row. Science columns are
/// deterministic; wall time is informational only.
pub fn compare_methods(
    prob: &ProblemInstance,
    configs: &[MethodConfig],
    stop: &StopRule,
) -> Result<ComparisonTable> {
    if configs.len() < 2 {
        return Err(Error::Parameter(format!(
            "compare needs >=2 configs (got {})",
            configs.len()
        )));
    }
    let mut rows = Vec::with_capacity(configs.len());
    for cfg in configs {
        let started = Instant::now();
        let outcome = match cfg {
            MethodConfig::Inertial { schedule, z0, z1 } => {
                discrete::run_inertial(prob, schedule, z0, z1, stop)
            }
            MethodConfig::Direct { tau, z0 } => discrete::run_direct_method(prob, *tau, z0, stop),
        };
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;
        rows.push(match outcome {
            Ok(run) => ComparisonRow {
                method: cfg.method_name().into(),
                schedule: cfg.schedule_label(),
                iterations_to_tol: (run.stop_reason == StopReason::Tol).then_some(run.iterations),
                final_residual: run.final_residual,
                wall_ms,
                error: None,
            },
            Err(e) => ComparisonRow {
                method: cfg.method_name().into(),
                schedule: cfg.schedule_label(),
                iterations_to_tol: None,
                final_residual: f64::NAN,
                wall_ms,
                error: Some(e.to_string()),
            },
        });
    }
    Ok(ComparisonTable { rows })
}

/// Columns: `method, schedule, iters_to_tol, final_residual, wall_ms`.
/// Unreached tolerances are written as `not-reached`.
pub fn write_comparison_csv(table: &ComparisonTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = open_writer(path)?;
    let io_err = |e: std::io::Error| Error::io(path, e);
    writeln!(w, "method,schedule,iters_to_tol,final_residual,wall_ms").map_err(io_err)?;
    for row in &table.rows {
        let iters = row
            .iterations_to_tol
            .map(|n| n.to_string())
            .unwrap_or_else(|| "not-reached".into());
        writeln!(
            w,
            "{},{},{},{},{:.3}",
            row.method,
            row.schedule,
            iters,
            format_float(row.final_residual),
            row.wall_ms
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
