//! Fixed-step integration of the second-order smoothed flow
//! `x″ + α₁(t)x′ = δ(t)[y(t) − x(t)]`, its Riccati-based first-order coupled
//! reformulation (which keeps every state inside the feasible set by
//! construction), the memoryless first-order baseline flow, and the
//! closed-form counterexample showing that the second-order flow can leave
//! the set when the coefficient condition `δ < ¼(α₁² + 2α₁′)` is dropped.

// Guards are written as `!(lhs < rhs)` on purpose: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::model::{Point, ProblemInstance};
use crate::schedule::ContinuousSchedule;
use crate::validate::Condition;

/// Membership tolerance the feasible steppers must hold.
pub const FEASIBILITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Euler,
}

#[derive(Clone, Debug)]
pub struct IntegratorConfig {
    pub step: f64,
    pub t_end: f64,
    pub method: Method,
    /// Keep every `record_every`-th grid point (the initial and final states
    /// are always kept).
    pub record_every: usize,
}

impl IntegratorConfig {
    pub fn new(step: f64, t_end: f64) -> Self {
        IntegratorConfig { step, t_end, method: Method::Rk4, record_every: 1 }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_record_every(mut self, record_every: usize) -> Self {
        self.record_every = record_every.max(1);
        self
    }

    fn check(&self, t0: f64) -> Result<usize> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Parameter(format!("step>0 (got step={})", self.step)));
        }
        if !(self.t_end > t0) {
            return Err(Error::Parameter(format!(
                "t_end>t0 (got t_end={}, t0={t0})",
                self.t_end
            )));
        }
        // Grid points t0 + k*step for k = 0..=n, never overshooting t_end.
        Ok(((self.t_end - t0) / self.step + 1e-9).floor() as usize)
    }
}

/// How the initial velocity of the second-order flow is supplied.
#[derive(Clone, Debug)]
pub enum InitialVelocity {
    /// `x′(t₀) = ¼ α₁(t₀)(x₁ − x₀)` with `x₁ ∈ Ω`.
    QuarterConvention { x1: Point },
    /// An explicit `x′(t₀)`.
    Explicit { v0: Point },
}

#[derive(Clone, Debug)]
pub struct SecondOrderState {
    pub t: f64,
    pub x: Point,
    pub v: Point,
}

/// Per-sample solver state beyond the position.
#[derive(Clone, Debug)]
pub enum SampleExtra {
    Velocity(Point),
    Coupled { u: Point, gamma: f64 },
    None,
}

#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: Point,
    pub residual: f64,
    pub feas_violation: f64,
    /// `‖x′‖`: the actual velocity norm for the second-order flow,
    /// `γ‖u−x‖` for the coupled flow, `δ‖y−x‖` for the first-order flow.
    pub speed: f64,
    pub extra: SampleExtra,
}

#[derive(Clone, Debug)]
pub struct ContinuousTrajectory {
    pub dim: usize,
    pub step: f64,
    pub samples: Vec<TrajectorySample>,
    /// Non-fatal observations made during integration (e.g. the smoothing
    /// compatibility `λγ ≤ 1` failing along the run).
    pub warnings: Vec<String>,
}

impl ContinuousTrajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectories hold at least the initial state")
    }

    pub fn max_feasibility_violation(&self) -> f64 {
        self.samples.iter().map(|s| s.feas_violation).fold(0.0, f64::max)
    }
}

/// The smoothing point
/// `y(t) = P_Ω(x + λ(t)v − α₀(t)/max{1,‖U(x+λ(t)v)‖}·U(x+λ(t)v))`.
pub fn smoothing_point(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    t: f64,
    x: &Point,
    v: &Point,
) -> Result<Point> {
    let base = x + v * sched.lambda(t);
    prob.normalized_forward_step(&base, sched.alpha0(t))
}

/// Right side of the first-order reduction: `dx = v`,
/// `dv = −α₁(t)v + δ(t)(y(t) − x)`.
pub fn rhs_second_order(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    t: f64,
    state: &SecondOrderState,
) -> Result<(Point, Point)> {
    let y = smoothing_point(prob, sched, t, &state.x, &state.v)?;
    Ok(rhs_second_order_with_target(sched, t, state, &y))
}

/// Same right side with the target `y` supplied directly (used by the
/// constant-target counterexample flow).
pub fn rhs_second_order_with_target(
    sched: &ContinuousSchedule,
    t: f64,
    state: &SecondOrderState,
    y: &Point,
) -> (Point, Point) {
    let dv = &state.v * (-sched.alpha1(t)) + (y - &state.x) * sched.delta(t);
    (state.v.clone(), dv)
}

fn initial_velocity(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    x0: &Point,
    init: &InitialVelocity,
) -> Result<Point> {
    match init {
        InitialVelocity::QuarterConvention { x1 } => {
            require_member(prob, x1, "x1")?;
            Ok((x1 - x0) * (0.25 * sched.alpha1(sched.t0())))
        }
        InitialVelocity::Explicit { v0 } => {
            if v0.len() != prob.dimension() {
                return Err(Error::DimensionMismatch { expected: prob.dimension(), got: v0.len() });
            }
            Ok(v0.clone())
        }
    }
}

fn require_member(prob: &ProblemInstance, x: &Point, name: &str) -> Result<()> {
    let v = prob.set().violation(x)?;
    if v > FEASIBILITY_TOL {
        return Err(Error::Config(format!(
            "{name} must lie in the feasible set (violation {v:.3e})"
        )));
    }
    Ok(())
}

fn check_finite_state(x: &Point, v: &Point, t: f64) -> Result<()> {
    if x.iter().chain(v.iter()).all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::Divergence {
            location: t,
            detail: "non-finite state component; last valid time reported".into(),
        })
    }
}

/// Integrate the second-order flow with the smoothing target. Feasibility is
/// NOT enforced: the flow only provably stays in the set under the quarter
/// bound, and the trajectory log records any excursion.
pub fn integrate_second_order(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    x0: &Point,
    init: &InitialVelocity,
    cfg: &IntegratorConfig,
) -> Result<ContinuousTrajectory> {
    integrate_second_order_impl(prob, sched, x0, init, cfg, None)
}

/// Second-order flow with a fixed target `y ≡ target` instead of the
/// smoothing point. The counterexample instance is the intended user.
pub fn integrate_second_order_with_target(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    target: &Point,
    x0: &Point,
    init: &InitialVelocity,
    cfg: &IntegratorConfig,
) -> Result<ContinuousTrajectory> {
    integrate_second_order_impl(prob, sched, x0, init, cfg, Some(target))
}

fn integrate_second_order_impl(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    x0: &Point,
    init: &InitialVelocity,
    cfg: &IntegratorConfig,
    target: Option<&Point>,
) -> Result<ContinuousTrajectory> {
    let t0 = sched.t0();
    let steps = cfg.check(t0)?;
    require_member(prob, x0, "x0")?;
    let mut x = x0.clone();
    let mut v = initial_velocity(prob, sched, x0, init)?;

    let rhs = |t: f64, x: &Point, v: &Point| -> Result<(Point, Point)> {
        let state = SecondOrderState { t, x: x.clone(), v: v.clone() };
        match target {
            Some(y) => Ok(rhs_second_order_with_target(sched, t, &state, y)),
            None => rhs_second_order(prob, sched, t, &state).map_err(|e| match e {
                // Overflow inside the flow is a divergence of the run.
                Error::NonFinite(what) => Error::Divergence {
                    location: t,
                    detail: format!("overflow in the right side ({what})"),
                },
                other => other,
            }),
        }
    };

    let mut samples = Vec::with_capacity(steps / cfg.record_every + 2);
    let mut record = |t: f64, x: &Point, v: &Point| -> Result<()> {
        samples.push(TrajectorySample {
            t,
            x: x.clone(),
            residual: prob.natural_residual(x)?,
            feas_violation: prob.set().violation(x)?,
            speed: v.norm(),
            extra: SampleExtra::Velocity(v.clone()),
        });
        Ok(())
    };
    record(t0, &x, &v)?;

    let h = cfg.step;
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        match cfg.method {
            Method::Rk4 => {
                let (k1x, k1v) = rhs(t, &x, &v)?;
                let (k2x, k2v) = rhs(t + 0.5 * h, &(&x + &k1x * (0.5 * h)), &(&v + &k1v * (0.5 * h)))?;
                let (k3x, k3v) = rhs(t + 0.5 * h, &(&x + &k2x * (0.5 * h)), &(&v + &k2v * (0.5 * h)))?;
                let (k4x, k4v) = rhs(t + h, &(&x + &k3x * h), &(&v + &k3v * h))?;
                x += (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6.0);
                v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
            }
            Method::Euler => {
                let (dx, dv) = rhs(t, &x, &v)?;
                x += dx * h;
                v += dv * h;
            }
        }
        check_finite_state(&x, &v, t)?;
        let t_next = t0 + (k + 1) as f64 * h;
        if (k + 1) % cfg.record_every == 0 || k + 1 == steps {
            record(t_next, &x, &v)?;
        }
    }

    Ok(ContinuousTrajectory { dim: prob.dimension(), step: h, samples, warnings: Vec::new() })
}

/// Grid solution of the scalar Riccati equation
/// `γ′ + α₁(t)γ = γ² + δ(t)`, `γ(t₀) = ¼α₁(t₀)`.
#[derive(Clone, Debug)]
pub struct GammaTable {
    pub t0: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl GammaTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time_at(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.step
    }

    /// Linear interpolation between grid points, clamped to the table range.
    pub fn value_at(&self, t: f64) -> f64 {
        let pos = (t - self.t0) / self.step;
        if pos <= 0.0 {
            return self.values[0];
        }
        let last = self.values.len() - 1;
        if pos >= last as f64 {
            return self.values[last];
        }
        let k = pos.floor() as usize;
        let w = pos - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }
}

/// Integrate the Riccati equation with RK4 on a fixed grid. The quarter
/// bound `δ < ¼(α₁² + 2α₁′)` is checked on the grid first, and the solution
/// is required to satisfy `0 < γ(t) < α₁(t)/2` at every grid point.
pub fn integrate_riccati(
    sched: &ContinuousSchedule,
    t0: f64,
    t_end: f64,
    step: f64,
) -> Result<GammaTable> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Parameter(format!("step>0 (got step={step})")));
    }
    if !(t_end > t0) {
        return Err(Error::Parameter(format!("t_end>t0 (got t_end={t_end}, t0={t0})")));
    }
    let steps = ((t_end - t0) / step + 1e-9).floor() as usize;

    for k in 0..=steps {
        let t = t0 + k as f64 * step;
        let bound = 0.25 * (sched.alpha1(t).powi(2) + 2.0 * sched.alpha1_derivative(t));
        if !(sched.delta(t) < bound) {
            return Err(Error::ConditionFailed {
                condition: Condition::DeltaQuarterBound.to_string(),
                location: t,
            });
        }
    }

    let f = |t: f64, g: f64| -sched.alpha1(t) * g + g * g + sched.delta(t);
    let mut g = 0.25 * sched.alpha1(t0);
    let mut values = Vec::with_capacity(steps + 1);
    let check = |g: f64, t: f64| -> Result<()> {
        if !(g > 0.0 && g < 0.5 * sched.alpha1(t) && g.is_finite()) {
            return Err(Error::ConditionFailed {
                condition: "0 < gamma < alpha1/2".into(),
                location: t,
            });
        }
        Ok(())
    };
    check(g, t0)?;
    values.push(g);
    for k in 0..steps {
        let t = t0 + k as f64 * step;
        let k1 = f(t, g);
        let k2 = f(t + 0.5 * step, g + 0.5 * step * k1);
        let k3 = f(t + 0.5 * step, g + 0.5 * step * k2);
        let k4 = f(t + step, g + step * k3);
        g += step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        check(g, t0 + (k + 1) as f64 * step)?;
        values.push(g);
    }
    Ok(GammaTable { t0, step, values })
}

/// Integrate the coupled reformulation
/// `x′ = γ(t)(u − x)`, `u′ = μ(t)(y − u)`, `μ = δ/γ`, `u(t₀) = x₁`,
/// with the explicit convex-combination scheme. Each update is a convex
/// combination of points of the set once `h·max(γ, μ) ≤ 1`, so both `x` and
/// `u` remain feasible to rounding at every step.
pub fn integrate_coupled_feasible(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    x0: &Point,
    x1: &Point,
    cfg: &IntegratorConfig,
) -> Result<ContinuousTrajectory> {
    let t0 = sched.t0();
    let steps = cfg.check(t0)?;
    require_member(prob, x0, "x0")?;
    require_member(prob, x1, "x1")?;
    let h = cfg.step;

    let gamma = integrate_riccati(sched, t0, cfg.t_end, h)?;

    // Convex-combination step cap, established by scanning the gamma table.
    let mut rate_max = 0.0f64;
    for (k, &g) in gamma.values.iter().enumerate() {
        let t = gamma.time_at(k);
        let mu = sched.delta(t) / g;
        if !mu.is_finite() {
            return Err(Error::Config(format!("mu = delta/gamma is not finite at t={t}")));
        }
        rate_max = rate_max.max(g).max(mu);
    }
    if h * rate_max > 1.0 {
        return Err(Error::Config(format!(
            "step {h} breaks the convex-combination cap: need step <= {:.6e}",
            1.0 / rate_max
        )));
    }

    let mut warnings = Vec::new();
    let mut x = x0.clone();
    let mut u = x1.clone();
    let mut samples = Vec::with_capacity(steps / cfg.record_every + 2);
    let mut record = |t: f64, x: &Point, u: &Point, g: f64| -> Result<()> {
        samples.push(TrajectorySample {
            t,
            x: x.clone(),
            residual: prob.natural_residual(x)?,
            feas_violation: prob.set().violation(x)?,
            speed: g * (u - x).norm(),
            extra: SampleExtra::Coupled { u: u.clone(), gamma: g },
        });
        Ok(())
    };
    record(t0, &x, &u, gamma.values[0])?;

    let mut lambda_gamma_bad: Option<f64> = None;
    for k in 0..steps {
        let t = gamma.time_at(k);
        let g = gamma.values[k];
        let mu = sched.delta(t) / g;
        let lg = sched.lambda(t) * g;
        if lg > 1.0 && lambda_gamma_bad.is_none() {
            lambda_gamma_bad = Some(t);
        }
        // Smoothing base x + λx′ = (1−λγ)x + λγu.
        let base = &x * (1.0 - lg) + &u * lg;
        let y = prob.normalized_forward_step(&base, sched.alpha0(t))?;
        let x_next = &x * (1.0 - h * g) + &u * (h * g);
        let u_next = &u * (1.0 - h * mu) + &y * (h * mu);
        x = x_next;
        u = u_next;
        check_finite_state(&x, &u, t)?;
        if (k + 1) % cfg.record_every == 0 || k + 1 == steps {
            record(gamma.time_at(k + 1), &x, &u, gamma.values[k + 1])?;
        }
    }
    if let Some(t) = lambda_gamma_bad {
        warnings.push(format!(
            "lambda(t)*gamma(t) > 1 first at t={t}; the smoothing base point may leave the set"
        ));
    }

    Ok(ContinuousTrajectory { dim: prob.dimension(), step: h, samples, warnings })
}

/// Integrate the first-order baseline flow
/// `x′ = δ(t){P_Ω(x − α(t)/max{1,‖U(x)‖}·U(x)) − x}` with the
/// convex-combination Euler scheme (requires `h·δ ≤ 1` on the grid), which
/// keeps the state feasible. The schedule supplies `δ` and `α = α₀`.
pub fn integrate_first_order(
    prob: &ProblemInstance,
    sched: &ContinuousSchedule,
    x0: &Point,
    cfg: &IntegratorConfig,
) -> Result<ContinuousTrajectory> {
    let t0 = sched.t0();
    let steps = cfg.check(t0)?;
    require_member(prob, x0, "x0")?;
    let h = cfg.step;

    let delta_max = (0..=steps)
        .map(|k| sched.delta(t0 + k as f64 * h))
        .fold(0.0f64, f64::max);
    if h * delta_max > 1.0 {
        return Err(Error::Config(format!(
            "step {h} breaks the convex-combination cap: need step <= {:.6e}",
            1.0 / delta_max
        )));
    }

    let mut x = x0.clone();
    let mut samples = Vec::with_capacity(steps / cfg.record_every + 2);
    let mut record = |t: f64, x: &Point, speed: f64| -> Result<()> {
        samples.push(TrajectorySample {
            t,
            x: x.clone(),
            residual: prob.natural_residual(x)?,
            feas_violation: prob.set().violation(x)?,
            speed,
            extra: SampleExtra::None,
        });
        Ok(())
    };
    let speed_at = |t: f64, x: &Point| -> Result<f64> {
        let y = prob.normalized_forward_step(x, sched.alpha0(t))?;
        Ok(sched.delta(t) * (y - x).norm())
    };
    record(t0, &x, speed_at(t0, &x)?)?;

    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let d = sched.delta(t);
        let y = prob.normalized_forward_step(&x, sched.alpha0(t))?;
        x = &x * (1.0 - h * d) + &y * (h * d);
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::Divergence { location: t, detail: "non-finite state".into() });
        }
        let t_next = t0 + (k + 1) as f64 * h;
        if (k + 1) % cfg.record_every == 0 || k + 1 == steps {
            record(t_next, &x, speed_at(t_next, &x)?)?;
        }
    }
    Ok(ContinuousTrajectory { dim: prob.dimension(), step: h, samples, warnings: Vec::new() })
}

/// Scalar position of the counterexample flow on `Ω = [1,2]`:
/// `x″ + 2x′ = 2(1 − x)`, `x(0) = 2`, `x′(0) = 0`, which solves to
/// `x(t) = 1 + e^{−t}(cos t + sin t)` and leaves the set on `(π, 3π/2)`.
pub fn counterexample_oracle(t: f64) -> f64 {
    1.0 + (-t).exp() * (t.cos() + t.sin())
}

/// The constant-coefficient schedule of the counterexample instance:
/// `α₁ ≡ 2`, `δ ≡ 2`, `λ ≡ 0`; `α₀` is irrelevant because the target is
/// pinned to [`REMARK_TARGET`].
pub fn remark_schedule() -> ContinuousSchedule {
    ContinuousSchedule::constants(1.0, 2.0, 2.0, 0.0, 0.0)
}

/// Constant target of the counterexample flow.
pub const REMARK_TARGET: f64 = 1.0;

/// Run the counterexample instance: constant-target second-order flow from
/// `x₀ = x₁ = 2`.
pub fn integrate_remark(cfg: &IntegratorConfig) -> Result<ContinuousTrajectory> {
    let prob = crate::problems::remark_counterexample();
    let sched = remark_schedule();
    let x0 = DVector::from_element(1, 2.0);
    integrate_second_order_with_target(
        &prob,
        &sched,
        &DVector::from_element(1, REMARK_TARGET),
        &x0,
        &InitialVelocity::QuarterConvention { x1: x0.clone() },
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::point;
    use crate::problems;
    use approx::assert_abs_diff_eq;

    fn sec5_schedule() -> ContinuousSchedule {
        ContinuousSchedule::power_law_b(2.5, 0.35, 0.71, 1.0, 0.0).unwrap()
    }

    #[test]
    fn smoothing_point_reduces_to_forward_step_when_lambda_zero() {
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let x = point(&[0.4, -0.2, 0.1]);
        let v = point(&[3.0, -1.0, 2.0]);
        let y = smoothing_point(&prob, &sched, 2.0, &x, &v).unwrap();
        let direct = prob.normalized_forward_step(&x, sched.alpha0(2.0)).unwrap();
        assert_eq!(y, direct);

        // At the origin U vanishes, so the origin is fixed.
        let zero = point(&[0.0; 3]);
        let y = smoothing_point(&prob, &sched, 0.0, &zero, &v).unwrap();
        assert_eq!(y, zero);
    }

    #[test]
    fn smoothing_point_frozen_value_at_t0() {
        // alpha0(0) = 1, so this equals the normalized forward step with
        // alpha = 1 (frozen in the model tests).
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let y = smoothing_point(&prob, &sched, 0.0, &point(&[1.0, 0.0, 0.0]), &point(&[0.0; 3]))
            .unwrap();
        let frozen = [0.5909689735604723, -0.7652973964806059, -0.25509913216020197];
        assert_abs_diff_eq!(y.as_slice(), frozen.as_slice(), epsilon = 1e-15);
    }

    #[test]
    fn rhs_vanishes_at_equilibrium() {
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let state = SecondOrderState { t: 0.0, x: point(&[0.0; 3]), v: point(&[0.0; 3]) };
        let (dx, dv) = rhs_second_order(&prob, &sched, 0.0, &state).unwrap();
        assert_eq!(dx.as_slice(), &[0.0; 3]);
        assert_eq!(dv.as_slice(), &[0.0; 3]);
    }

    #[test]
    fn rhs_remark_state() {
        // alpha1 = delta = 2, y = 1, x = 2, v = 0: dv = 2(1-2) = -2.
        let sched = remark_schedule();
        let state = SecondOrderState { t: 0.0, x: point(&[2.0]), v: point(&[0.0]) };
        let (dx, dv) = rhs_second_order_with_target(&sched, 0.0, &state, &point(&[1.0]));
        assert_eq!(dx.as_slice(), &[0.0]);
        assert_eq!(dv.as_slice(), &[-2.0]);
    }

    #[test]
    fn rhs_is_linear_in_delta() {
        // Doubling delta doubles dv + alpha1*v at fixed y.
        let a = ContinuousSchedule::constants(1.0, 3.0, 1.0, 0.0, 0.0);
        let b = ContinuousSchedule::constants(1.0, 3.0, 2.0, 0.0, 0.0);
        let state = SecondOrderState { t: 0.0, x: point(&[0.5, -0.5]), v: point(&[1.0, 2.0]) };
        let y = point(&[0.1, 0.2]);
        let (_, dva) = rhs_second_order_with_target(&a, 0.0, &state, &y);
        let (_, dvb) = rhs_second_order_with_target(&b, 0.0, &state, &y);
        let fa = dva + &state.v * 3.0;
        let fb = dvb + &state.v * 3.0;
        assert_abs_diff_eq!((fa * 2.0).as_slice(), fb.as_slice(), epsilon = 1e-14);
    }

    #[test]
    fn remark_matches_closed_form_and_leaves_set() {
        let cfg = IntegratorConfig::new(1e-3, 1.5 * std::f64::consts::PI);
        let traj = integrate_remark(&cfg).unwrap();
        let mut sup = 0.0f64;
        for s in &traj.samples {
            sup = sup.max((s.x[0] - counterexample_oracle(s.t)).abs());
        }
        assert!(sup < 1e-6, "sup error {sup}");
        let pi = std::f64::consts::PI;
        let exits = traj
            .samples
            .iter()
            .any(|s| s.t > pi && s.t < 1.5 * pi && s.feas_violation > 0.0);
        assert!(exits, "trajectory must leave [1,2] on (pi, 3pi/2)");
    }

    #[test]
    fn counterexample_oracle_values() {
        assert_eq!(counterexample_oracle(0.0), 2.0);
        assert_abs_diff_eq!(
            counterexample_oracle(std::f64::consts::PI),
            0.9567860817362277,
            epsilon = 1e-15
        );
        assert!(counterexample_oracle(40.0) - 1.0 < 1e-15);
    }

    #[test]
    fn rk4_fourth_order_on_counterexample() {
        // Step sizes chosen so both errors sit far above roundoff.
        let t_end = 1.5 * std::f64::consts::PI;
        let sup_err = |h: f64| {
            let traj = integrate_remark(&IntegratorConfig::new(h, t_end)).unwrap();
            traj.samples
                .iter()
                .map(|s| (s.x[0] - counterexample_oracle(s.t)).abs())
                .fold(0.0f64, f64::max)
        };
        let ratio = sup_err(0.05) / sup_err(0.025);
        assert!((8.0..=32.0).contains(&ratio), "order ratio {ratio}");
    }

    #[test]
    fn stationary_start_stays_put() {
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let x0 = point(&[0.0; 3]);
        let traj = integrate_second_order(
            &prob,
            &sched,
            &x0,
            &InitialVelocity::QuarterConvention { x1: x0.clone() },
            &IntegratorConfig::new(1e-2, 5.0),
        )
        .unwrap();
        for s in &traj.samples {
            assert!(s.x.norm() < 1e-8);
        }

        let traj =
            integrate_coupled_feasible(&prob, &sched, &x0, &x0, &IntegratorConfig::new(1e-2, 5.0))
                .unwrap();
        for s in &traj.samples {
            assert!(s.x.norm() < 1e-8);
        }
    }

    #[test]
    fn sec5_residual_decreases_with_explicit_velocity() {
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let traj = integrate_second_order(
            &prob,
            &sched,
            &point(&[1.0, 0.0, 0.0]),
            &InitialVelocity::Explicit { v0: point(&[-0.75, 0.75, 0.0]) },
            &IntegratorConfig::new(1e-3, 50.0).with_record_every(100),
        )
        .unwrap();
        assert!(traj.last().residual < traj.samples[0].residual);
    }

    #[test]
    fn velocity_energy_decays_on_long_benchmark_run() {
        // b(t) = speed^2/2 falls below 1e-6 well before t = 1000.
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let traj = integrate_second_order(
            &prob,
            &sched,
            &point(&[1.0, 0.0, 0.0]),
            &InitialVelocity::QuarterConvention { x1: point(&[0.0, 1.0, 0.0]) },
            &IntegratorConfig::new(1e-2, 1000.0).with_record_every(1000),
        )
        .unwrap();
        let last = traj.last();
        let b = 0.5 * last.speed * last.speed;
        assert!(b < 1e-6, "b(1000) = {b:.3e}");
    }

    #[test]
    fn riccati_autonomous_limit_shape() {
        // alpha1 = 2.5, delta = 1: gamma(0) = 0.625 and gamma decreases
        // monotonically to the smaller root 0.5 of g^2 - 2.5 g + 1.
        let sched = ContinuousSchedule::constants(1.0, 2.5, 1.0, 0.0, 0.0);
        let table = integrate_riccati(&sched, 0.0, 50.0, 1e-3).unwrap();
        assert_eq!(table.values[0], 0.625);
        assert!(table.values.windows(2).all(|w| w[1] <= w[0]));
        assert!(table.values.last().unwrap() - 0.5 < 1e-6);
        assert!(*table.values.last().unwrap() > 0.5);
    }

    #[test]
    fn riccati_rejects_quarter_bound_violation() {
        let sched = ContinuousSchedule::constants(1.0, 2.0, 2.0, 0.0, 0.0);
        let err = integrate_riccati(&sched, 0.0, 1.0, 1e-2).unwrap_err();
        assert!(matches!(err, Error::ConditionFailed { .. }), "got {err}");
    }

    #[test]
    fn riccati_initial_value_is_quarter_alpha1() {
        let sched = sec5_schedule();
        let table = integrate_riccati(&sched, 0.0, 1.0, 1e-3).unwrap();
        assert_eq!(table.values[0], 0.25 * sched.alpha1(0.0));
    }

    #[test]
    fn coupled_agrees_with_second_order() {
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let x0 = point(&[1.0, 0.0, 0.0]);
        let x1 = point(&[0.0, 1.0, 0.0]);
        let cfg = IntegratorConfig::new(1e-3, 10.0);
        let a = integrate_second_order(
            &prob,
            &sched,
            &x0,
            &InitialVelocity::QuarterConvention { x1: x1.clone() },
            &cfg,
        )
        .unwrap();
        let b = integrate_coupled_feasible(&prob, &sched, &x0, &x1, &cfg).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        let gap = a
            .samples
            .iter()
            .zip(&b.samples)
            .map(|(s, t)| (&s.x - &t.x).norm())
            .fold(0.0f64, f64::max);
        assert!(gap <= 1e-3, "gap {gap}");
        assert!(b.max_feasibility_violation() <= FEASIBILITY_TOL);
    }

    #[test]
    fn coupled_step_cap_enforced() {
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let x0 = point(&[1.0, 0.0, 0.0]);
        let x1 = point(&[0.0, 1.0, 0.0]);
        // mu = delta/gamma reaches ~1/0.35, so step 0.5 breaks the cap.
        let err = integrate_coupled_feasible(
            &prob,
            &sched,
            &x0,
            &x1,
            &IntegratorConfig::new(0.5, 10.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)), "got {err}");
    }

    #[test]
    fn first_order_baseline_feasible_and_decreasing() {
        let prob = problems::paper_sec5();
        // delta = 1, alpha(t) = (t+1)^{-0.71}.
        let sched = ContinuousSchedule::custom(
            |t| (t + 1.0).powf(-0.71),
            |_| 1.0,
            |_| 1.0,
            |_| 0.0,
            0.0,
        );
        let x0 = point(&[1.0, 0.0, 0.0]);
        let traj = integrate_first_order(
            &prob,
            &sched,
            &x0,
            &IntegratorConfig::new(1e-2, 50.0).with_record_every(50),
        )
        .unwrap();
        assert!(traj.last().residual < traj.samples[0].residual);
        assert!(traj.max_feasibility_violation() <= FEASIBILITY_TOL);

        // Stationary at the reference solution.
        let stat = integrate_first_order(
            &prob,
            &sched,
            &point(&[0.0; 3]),
            &IntegratorConfig::new(1e-2, 5.0),
        )
        .unwrap();
        assert!(stat.last().x.norm() < 1e-12);
    }

    #[test]
    fn first_order_step_cap() {
        let prob = problems::paper_sec5();
        let sched = ContinuousSchedule::constants(1.0, 1.0, 5.0, 0.0, 0.0);
        let err = integrate_first_order(
            &prob,
            &sched,
            &point(&[0.0; 3]),
            &IntegratorConfig::new(0.5, 2.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn infeasible_start_rejected() {
        let prob = problems::paper_sec5();
        let sched = sec5_schedule();
        let bad = point(&[2.0, 0.0, 0.0]);
        let err = integrate_second_order(
            &prob,
            &sched,
            &bad,
            &InitialVelocity::Explicit { v0: point(&[0.0; 3]) },
            &IntegratorConfig::new(1e-2, 1.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn euler_method_runs() {
        let prob = problems::identity_ball();
        let sched = sec5_schedule();
        let x0 = point(&[0.5, 0.0, 0.0]);
        let traj = integrate_second_order(
            &prob,
            &sched,
            &x0,
            &InitialVelocity::QuarterConvention { x1: x0.clone() },
            &IntegratorConfig::new(1e-3, 5.0).with_method(Method::Euler),
        )
        .unwrap();
        assert!(traj.last().residual < traj.samples[0].residual);
    }
}
