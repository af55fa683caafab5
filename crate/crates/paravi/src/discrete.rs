//! The inertial projection-type iteration
//! `z(n+1) = [2−β₁(n)−ξ(n)]z(n) + [β₁(n)−1]z(n−1) + ξ(n)w(n)` with smoothing
//! point `w(n)`, the memoryless direct projected-step baseline, stopping
//! logic, and the forward/backward difference identities the convergence
//! analysis rests on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Point, ProblemInstance};
use crate::schedule::DiscreteSchedule;

/// Membership tolerance the iteration must hold under the convex window
/// `1 ≤ β₁ ≤ β₁+ξ ≤ 2`.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// The two-term memory driving the inertial step.
#[derive(Clone, Debug)]
pub struct IterateWindow {
    pub n: u64,
    pub z_prev: Point,
    pub z_curr: Point,
}

impl IterateWindow {
    pub fn new(n: u64, z_prev: Point, z_curr: Point) -> Self {
        IterateWindow { n, z_prev, z_curr }
    }

    /// `z∇(n) = z(n) − z(n−1)`.
    pub fn backward_difference(&self) -> Point {
        &self.z_curr - &self.z_prev
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct StopRule {
    pub residual_tol: f64,
    pub max_iters: u64,
    /// Stop once the step norm stays below this for `stagnation_window`
    /// consecutive iterations; `0` disables the check.
    pub stagnation_tol: f64,
    pub stagnation_window: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            residual_tol: 1e-6,
            max_iters: 1_000_000,
            stagnation_tol: 0.0,
            stagnation_window: 10,
        }
    }
}

impl StopRule {
    pub fn tol(residual_tol: f64, max_iters: u64) -> Self {
        StopRule { residual_tol, max_iters, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Tol,
    MaxIters,
    Stagnation,
}

#[derive(Clone, Debug)]
pub struct IterateSample {
    pub n: u64,
    pub z: Point,
    pub residual: f64,
    pub feas_violation: f64,
    /// `‖z(n) − z(n−1)‖` (zero at the starting index of the direct method).
    pub step_norm: f64,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub samples: Vec<IterateSample>,
    pub stop_reason: StopReason,
    pub final_point: Point,
    pub final_residual: f64,
    /// Index of the last iterate.
    pub iterations: u64,
}

impl RunResult {
    pub fn max_feasibility_violation(&self) -> f64 {
        self.samples.iter().map(|s| s.feas_violation).fold(0.0, f64::max)
    }
}

/// Logging cadence; the final iterate is always logged.
#[derive(Clone, Copy, Debug)]
pub enum LogCadence {
    /// Every iteration up to `dense_until`, then every `every`-th.
    DenseThenSparse { dense_until: u64, every: u64 },
    Every(u64),
}

impl Default for LogCadence {
    fn default() -> Self {
        LogCadence::DenseThenSparse { dense_until: 1000, every: 100 }
    }
}

impl LogCadence {
    fn should_log(&self, n: u64) -> bool {
        match *self {
            LogCadence::DenseThenSparse { dense_until, every } => {
                n <= dense_until || n.is_multiple_of(every)
            }
            LogCadence::Every(k) => n.is_multiple_of(k.max(1)),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub cadence: LogCadence,
    /// The admissibility conditions require `η(n) ≤ 0`; positive values are
    /// rejected unless this override is set.
    pub allow_positive_eta: bool,
}

/// The discrete smoothing point
/// `w(n) = P_Ω(z + η(z−z_prev) − β₀/max{1,‖U(·)‖}·U(·))`. With
/// `−1 ≤ η ≤ 0` the pre-projection base point is already a convex
/// combination of `z(n)` and `z(n−1)`.
pub fn smoothing_point_discrete(
    prob: &ProblemInstance,
    sched: &DiscreteSchedule,
    window: &IterateWindow,
) -> Result<Point> {
    let base = &window.z_curr + window.backward_difference() * sched.eta(window.n);
    prob.normalized_forward_step(&base, sched.beta0(window.n))
}

/// One inertial update. Under the convex window the three coefficients are
/// nonnegative and sum to one, so the result is a convex combination of
/// feasible points.
pub fn inertial_step(
    prob: &ProblemInstance,
    sched: &DiscreteSchedule,
    window: &IterateWindow,
) -> Result<Point> {
    let n = window.n;
    let (b1, xi) = (sched.beta1(n), sched.xi(n));
    if !(b1.is_finite() && xi.is_finite()) {
        return Err(Error::NonFinite(format!("schedule values at n={n}")));
    }
    let w = smoothing_point_discrete(prob, sched, window)?;
    Ok(&window.z_curr * (2.0 - b1 - xi) + &window.z_prev * (b1 - 1.0) + w * xi)
}

/// Overflow inside a step (operator evaluation or projection hitting
/// non-finite intermediates) is a divergence of the run, not a usage error.
fn diverged(e: Error, n: u64) -> Error {
    match e {
        Error::NonFinite(what) => Error::Divergence {
            location: n as f64,
            detail: format!("overflow during step ({what})"),
        },
        other => other,
    }
}

fn require_member(prob: &ProblemInstance, z: &Point, name: &str) -> Result<()> {
    let v = prob.set().violation(z)?;
    if v > FEASIBILITY_TOL {
        return Err(Error::Config(format!(
            "{name} must lie in the feasible set (violation {v:.3e})"
        )));
    }
    Ok(())
}

/// Run the inertial iteration from `(z0, z1)`.
pub fn run_inertial(
    prob: &ProblemInstance,
    sched: &DiscreteSchedule,
    z0: &Point,
    z1: &Point,
    stop: &StopRule,
) -> Result<RunResult> {
    run_inertial_with(prob, sched, z0, z1, stop, &RunOptions::default())
}

pub fn run_inertial_with(
    prob: &ProblemInstance,
    sched: &DiscreteSchedule,
    z0: &Point,
    z1: &Point,
    stop: &StopRule,
    opts: &RunOptions,
) -> Result<RunResult> {
    require_member(prob, z0, "z0")?;
    require_member(prob, z1, "z1")?;
    if stop.max_iters == 0 {
        return Err(Error::Parameter("max_iters>=1".into()));
    }

    let mut z_prev = z0.clone();
    let mut z = z1.clone();
    let mut step_norm = (&z - &z_prev).norm();
    let mut n: u64 = 1;
    let mut stagnant: u64 = 0;
    let mut samples = Vec::new();

    loop {
        let residual = prob.natural_residual(&z).map_err(|e| diverged(e, n))?;
        let reason = if residual <= stop.residual_tol {
            Some(StopReason::Tol)
        } else if stop.stagnation_tol > 0.0 && stagnant >= stop.stagnation_window {
            Some(StopReason::Stagnation)
        } else if n >= stop.max_iters {
            Some(StopReason::MaxIters)
        } else {
            None
        };
        if opts.cadence.should_log(n) || reason.is_some() {
            samples.push(IterateSample {
                n,
                z: z.clone(),
                residual,
                feas_violation: prob.set().violation(&z)?,
                step_norm,
            });
        }
        if let Some(stop_reason) = reason {
            return Ok(RunResult {
                samples,
                stop_reason,
                final_point: z,
                final_residual: residual,
                iterations: n,
            });
        }

        let eta = sched.eta(n);
        if eta > 0.0 && !opts.allow_positive_eta {
            return Err(Error::Config(format!(
                "eta({n})={eta} > 0 violates the admissible range; \
                 set RunOptions::allow_positive_eta to override"
            )));
        }
        let window = IterateWindow::new(n, z_prev.clone(), z.clone());
        let next = inertial_step(prob, sched, &window).map_err(|e| diverged(e, n))?;
        if next.iter().any(|c| !c.is_finite()) {
            return Err(Error::Divergence {
                location: n as f64,
                detail: "non-finite iterate".into(),
            });
        }
        step_norm = (&next - &z).norm();
        if stop.stagnation_tol > 0.0 {
            if step_norm < stop.stagnation_tol {
                stagnant += 1;
            } else {
                stagnant = 0;
            }
        }
        z_prev = z;
        z = next;
        n += 1;
    }
}

/// Run the direct projected-step baseline
/// `x(n+1) = P_Ω(x(n) − β₀(n)/max{1,‖U(x(n))‖}·U(x(n)))` with
/// `β₀(n) = n^{−τ}`, `τ ∈ (0.5, 1]`. The index starts at `n = 1`.
pub fn run_direct_method(
    prob: &ProblemInstance,
    tau: f64,
    z0: &Point,
    stop: &StopRule,
) -> Result<RunResult> {
    run_direct_method_with(prob, tau, z0, stop, &RunOptions::default())
}

pub fn run_direct_method_with(
    prob: &ProblemInstance,
    tau: f64,
    z0: &Point,
    stop: &StopRule,
    opts: &RunOptions,
) -> Result<RunResult> {
    if !(tau > 0.5 && tau <= 1.0) {
        return Err(Error::Parameter(format!("0.5<tau<=1 (got tau={tau})")));
    }
    require_member(prob, z0, "z0")?;
    if stop.max_iters == 0 {
        return Err(Error::Parameter("max_iters>=1".into()));
    }

    let mut x = z0.clone();
    let mut step_norm = 0.0;
    let mut n: u64 = 1;
    let mut stagnant: u64 = 0;
    let mut samples = Vec::new();

    loop {
        let residual = prob.natural_residual(&x).map_err(|e| diverged(e, n))?;
        let reason = if residual <= stop.residual_tol {
            Some(StopReason::Tol)
        } else if stop.stagnation_tol > 0.0 && stagnant >= stop.stagnation_window {
            Some(StopReason::Stagnation)
        } else if n >= stop.max_iters {
            Some(StopReason::MaxIters)
        } else {
            None
        };
        if opts.cadence.should_log(n) || reason.is_some() {
            samples.push(IterateSample {
                n,
                z: x.clone(),
                residual,
                feas_violation: prob.set().violation(&x)?,
                step_norm,
            });
        }
        if let Some(stop_reason) = reason {
            return Ok(RunResult {
                samples,
                stop_reason,
                final_point: x,
                final_residual: residual,
                iterations: n,
            });
        }

        let beta0 = (n as f64).powf(-tau);
        let next = prob.normalized_forward_step(&x, beta0).map_err(|e| diverged(e, n))?;
        if next.iter().any(|c| !c.is_finite()) {
            return Err(Error::Divergence {
                location: n as f64,
                detail: "non-finite iterate".into(),
            });
        }
        step_norm = (&next - &x).norm();
        if stop.stagnation_tol > 0.0 {
            if step_norm < stop.stagnation_tol {
                stagnant += 1;
            } else {
                stagnant = 0;
            }
        }
        x = next;
        n += 1;
    }
}

/// Verify the forward/backward difference identities on random sequences:
/// the two inner-product product rules and
/// `z^{Δ∇} = z^{∇Δ} = z(n+1) − 2z(n) + z(n−1) = z^Δ(n) − z^∇(n)`.
pub fn difference_identities_check(seed: u64, trials: u64) -> bool {
    use rand::{Rng, SeedableRng};
    if trials == 0 {
        return false;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    const LEN: usize = 6;
    const DIM: usize = 3;
    const TOL: f64 = 1e-12;
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Point> {
        (0..LEN)
            .map(|_| Point::from_iterator(DIM, (0..DIM).map(|_| rng.gen_range(-1.0..1.0))))
            .collect()
    };
    let fwd = |s: &[Point], n: usize| &s[n + 1] - &s[n];
    let bwd = |s: &[Point], n: usize| &s[n] - &s[n - 1];

    for _ in 0..trials {
        let h = draw(&mut rng);
        let g = draw(&mut rng);
        let z = draw(&mut rng);
        let ip: Vec<f64> = h.iter().zip(&g).map(|(a, b)| a.dot(b)).collect();
        for n in 1..LEN - 1 {
            // <h,g>^Δ(n) = <h^Δ,g> + <h,g^Δ> + <h^Δ,g^Δ>
            let lhs = ip[n + 1] - ip[n];
            let rhs = fwd(&h, n).dot(&g[n]) + h[n].dot(&fwd(&g, n)) + fwd(&h, n).dot(&fwd(&g, n));
            if (lhs - rhs).abs() > TOL {
                return false;
            }
            // <h,g>^∇(n) = <h^∇,g> + <h,g^∇> − <h^∇,g^∇>
            let lhs = ip[n] - ip[n - 1];
            let rhs = bwd(&h, n).dot(&g[n]) + h[n].dot(&bwd(&g, n)) - bwd(&h, n).dot(&bwd(&g, n));
            if (lhs - rhs).abs() > TOL {
                return false;
            }
            // z^{Δ∇}(n) = z^{∇Δ}(n) = z(n+1) − 2z(n) + z(n−1) = z^Δ − z^∇
            let dn = fwd(&z, n) - fwd(&z, n - 1); // (z^Δ)^∇
            let nd = bwd(&z, n + 1) - bwd(&z, n); // (z^∇)^Δ
            let direct = &z[n + 1] - &z[n] * 2.0 + &z[n - 1];
            let diff = fwd(&z, n) - bwd(&z, n);
            if (&dn - &nd).norm() > TOL
                || (&dn - &direct).norm() > TOL
                || (&dn - &diff).norm() > TOL
            {
                return false;
            }
        }
    }
    true
}
