//! C ABI for the solver toolkit.
//!
//! Conventions:
//! * every constructor returns a [`ParaviStatus`] and writes an opaque handle
//!   through an out-pointer; handles are freed with the matching `_free`;
//! * every fallible call returns a [`ParaviStatus`]; on failure a
//!   thread-local message is retrievable with [`paravi_last_error`];
//! * vectors are plain `double` buffers with an explicit length.
//!
//! The generated header lives at `include/paravi.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use paravi::continuous::{
    integrate_coupled_feasible, integrate_second_order, InitialVelocity, IntegratorConfig,
    ContinuousTrajectory,
};
use paravi::discrete::{run_direct_method, run_inertial, RunResult, StopReason, StopRule};
use paravi::model::point;
use paravi::validate::{validate_discrete, DEFAULT_DISCRETE_HORIZON};
use paravi::{ContinuousSchedule, DiscreteSchedule, Error, ProblemInstance};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParaviStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    InvalidArgument = 3,
    DimensionMismatch = 4,
    ValidationFailed = 5,
    Divergence = 6,
    Io = 7,
    Panic = 8,
}

/// Reason a discrete run stopped.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParaviStopReason {
    Tol = 0,
    MaxIters = 1,
    Stagnation = 2,
}

/// Stopping rule for the discrete solvers.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct ParaviStopRule {
    pub residual_tol: f64,
    pub max_iters: u64,
    /// `0` disables the stagnation check.
    pub stagnation_tol: f64,
    pub stagnation_window: u64,
}

impl From<ParaviStopRule> for StopRule {
    fn from(s: ParaviStopRule) -> Self {
        StopRule {
            residual_tol: s.residual_tol,
            max_iters: s.max_iters,
            stagnation_tol: s.stagnation_tol,
            stagnation_window: s.stagnation_window,
        }
    }
}

/// Opaque problem handle.
pub struct ParaviProblem {
    inner: ProblemInstance,
}

/// Opaque continuous-schedule handle.
pub struct ParaviContinuousSchedule {
    inner: ContinuousSchedule,
}

/// Opaque discrete-schedule handle.
pub struct ParaviDiscreteSchedule {
    inner: DiscreteSchedule,
}

/// Opaque result of a discrete run.
pub struct ParaviRunResult {
    inner: RunResult,
}

/// Opaque continuous trajectory.
pub struct ParaviTrajectory {
    inner: ContinuousTrajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_for(err: &Error) -> ParaviStatus {
    match err {
        Error::DimensionMismatch { .. } => ParaviStatus::DimensionMismatch,
        Error::Parameter(_) | Error::ConditionFailed { .. } => ParaviStatus::ValidationFailed,
        Error::Divergence { .. } => ParaviStatus::Divergence,
        Error::Io { .. } => ParaviStatus::Io,
        _ => ParaviStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> ParaviStatus {
    let status = status_for(&err);
    set_error(err.to_string());
    status
}

/// Run a closure, translating panics and errors into status codes.
fn guarded(f: impl FnOnce() -> Result<ParaviStatus, Error>) -> ParaviStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(err)) => fail(err),
        Err(_) => {
            set_error("internal panic");
            ParaviStatus::Panic
        }
    }
}

/// Copy the last error message into `buf` (NUL-terminated, truncated to
/// `cap`). Returns the full message length in bytes, excluding the NUL.
///
/// # Safety
/// `buf` must point to `cap` writable bytes (or be NULL with `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn paravi_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, ParaviStatus> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(ParaviStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        ParaviStatus::Utf8
    })
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Result<&'a [f64], ParaviStatus> {
    if ptr.is_null() {
        set_error("NULL vector argument");
        return Err(ParaviStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn write_out<T>(out: *mut *mut T, value: T) -> ParaviStatus {
    if out.is_null() {
        set_error("NULL out-pointer");
        return ParaviStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    ParaviStatus::Ok
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return Ok(status),
        }
    };
}

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

/// Create a bundled problem: `paper-sec5`, `remark-counterexample` or
/// `identity-ball`.
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_problem_builtin(
    id: *const c_char,
    out: *mut *mut ParaviProblem,
) -> ParaviStatus {
    guarded(|| {
        let id = try_status!(str_arg(id));
        match paravi::problems::by_id(id) {
            Some(inner) => Ok(write_out(out, ParaviProblem { inner })),
            None => {
                set_error(format!("unknown builtin problem {id:?}"));
                Ok(ParaviStatus::InvalidArgument)
            }
        }
    })
}

/// Create a problem from the JSON document format described in the README.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_problem_from_json(
    json: *const c_char,
    out: *mut *mut ParaviProblem,
) -> ParaviStatus {
    guarded(|| {
        let json = try_status!(str_arg(json));
        let inner = ProblemInstance::from_json_str(json)?;
        Ok(write_out(out, ParaviProblem { inner }))
    })
}

/// # Safety
/// `p` must come from a problem constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn paravi_problem_free(p: *mut ParaviProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live problem handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_problem_dimension(
    p: *const ParaviProblem,
    out: *mut usize,
) -> ParaviStatus {
    if p.is_null() || out.is_null() {
        set_error("NULL argument");
        return ParaviStatus::NullPointer;
    }
    *out = (*p).inner.dimension();
    ParaviStatus::Ok
}

/// Natural residual `‖x − P(x − U(x))‖` at `x`.
///
/// # Safety
/// `p` must be live; `x` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn paravi_natural_residual(
    p: *const ParaviProblem,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> ParaviStatus {
    guarded(|| {
        if p.is_null() || out.is_null() {
            set_error("NULL argument");
            return Ok(ParaviStatus::NullPointer);
        }
        let x = try_status!(slice_arg(x, len));
        *out = (*p).inner.natural_residual(&point(x))?;
        Ok(ParaviStatus::Ok)
    })
}

/// Euclidean projection onto the problem's feasible set, written in place.
///
/// # Safety
/// `p` must be live; `x` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn paravi_project(
    p: *const ParaviProblem,
    x: *mut f64,
    len: usize,
) -> ParaviStatus {
    guarded(|| {
        if p.is_null() || x.is_null() {
            set_error("NULL argument");
            return Ok(ParaviStatus::NullPointer);
        }
        let input = std::slice::from_raw_parts(x, len);
        let projected = (*p).inner.project(&point(input))?;
        ptr::copy_nonoverlapping(projected.as_slice().as_ptr(), x, len);
        Ok(ParaviStatus::Ok)
    })
}

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

/// Build the continuous vanishing-delta power-law family.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_schedule_powerlaw_a(
    h: f64,
    s: f64,
    p: f64,
    q: f64,
    t0: f64,
    out: *mut *mut ParaviContinuousSchedule,
) -> ParaviStatus {
    guarded(|| {
        let inner = ContinuousSchedule::power_law_a(h, s, p, q, t0)?;
        Ok(write_out(out, ParaviContinuousSchedule { inner }))
    })
}

/// Build the continuous constant-delta power-law family.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_schedule_powerlaw_b(
    h: f64,
    s: f64,
    q: f64,
    u: f64,
    t0: f64,
    out: *mut *mut ParaviContinuousSchedule,
) -> ParaviStatus {
    guarded(|| {
        let inner = ContinuousSchedule::power_law_b(h, s, q, u, t0)?;
        Ok(write_out(out, ParaviContinuousSchedule { inner }))
    })
}

/// # Safety
/// `s` must come from a schedule constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn paravi_schedule_continuous_free(s: *mut ParaviContinuousSchedule) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Build the discrete power-law family. Pass `omega = NULL` for the default
/// shift (lower bound + 1).
///
/// # Safety
/// `omega` must be NULL or point to one double; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn paravi_schedule_powerlaw_d(
    p: f64,
    q: f64,
    delta: f64,
    theta: f64,
    lambda: f64,
    omega: *const f64,
    out: *mut *mut ParaviDiscreteSchedule,
) -> ParaviStatus {
    guarded(|| {
        let omega = if omega.is_null() { None } else { Some(*omega) };
        let inner = DiscreteSchedule::power_law_d(p, q, delta, theta, lambda, omega)?;
        Ok(write_out(out, ParaviDiscreteSchedule { inner }))
    })
}

/// # Safety
/// `s` must come from a schedule constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn paravi_schedule_discrete_free(s: *mut ParaviDiscreteSchedule) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Contraction constants `(Q1, Q2)` of a power-law discrete schedule.
///
/// # Safety
/// `s` must be live; `q1`, `q2` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn paravi_schedule_q_constants(
    s: *const ParaviDiscreteSchedule,
    q1: *mut f64,
    q2: *mut f64,
) -> ParaviStatus {
    guarded(|| {
        if s.is_null() || q1.is_null() || q2.is_null() {
            set_error("NULL argument");
            return Ok(ParaviStatus::NullPointer);
        }
        let q = (*s).inner.family_constants()?;
        *q1 = q.q1;
        *q2 = q.q2;
        Ok(ParaviStatus::Ok)
    })
}

/// Check the discrete admissibility conditions up to `horizon` (`0` uses the
/// default). `satisfied` receives the verdict; the call itself fails only on
/// bad inputs.
///
/// # Safety
/// `s` must be live; `satisfied` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_validate_discrete(
    s: *const ParaviDiscreteSchedule,
    q1: f64,
    q2: f64,
    horizon: u64,
    satisfied: *mut bool,
) -> ParaviStatus {
    guarded(|| {
        if s.is_null() || satisfied.is_null() {
            set_error("NULL argument");
            return Ok(ParaviStatus::NullPointer);
        }
        let horizon = if horizon == 0 { DEFAULT_DISCRETE_HORIZON } else { horizon };
        let report = validate_discrete(&(*s).inner, q1, q2, horizon)?;
        *satisfied = report.satisfied;
        Ok(ParaviStatus::Ok)
    })
}

// ---------------------------------------------------------------------------
// Discrete runs
// ---------------------------------------------------------------------------

/// Run the inertial iteration from `(z0, z1)`.
///
/// # Safety
/// All handles must be live; `z0`, `z1` must point to `dim` doubles; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_run_inertial(
    p: *const ParaviProblem,
    s: *const ParaviDiscreteSchedule,
    z0: *const f64,
    z1: *const f64,
    dim: usize,
    stop: ParaviStopRule,
    out: *mut *mut ParaviRunResult,
) -> ParaviStatus {
    guarded(|| {
        if p.is_null() || s.is_null() {
            set_error("NULL handle");
            return Ok(ParaviStatus::NullPointer);
        }
        let z0 = try_status!(slice_arg(z0, dim));
        let z1 = try_status!(slice_arg(z1, dim));
        let inner = run_inertial(&(*p).inner, &(*s).inner, &point(z0), &point(z1), &stop.into())?;
        Ok(write_out(out, ParaviRunResult { inner }))
    })
}

/// Run the direct projected-step baseline with `beta0(n) = n^{-tau}`.
///
/// # Safety
/// `p` must be live; `z0` must point to `dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn paravi_run_direct(
    p: *const ParaviProblem,
    tau: f64,
    z0: *const f64,
    dim: usize,
    stop: ParaviStopRule,
    out: *mut *mut ParaviRunResult,
) -> ParaviStatus {
    guarded(|| {
        if p.is_null() {
            set_error("NULL handle");
            return Ok(ParaviStatus::NullPointer);
        }
        let z0 = try_status!(slice_arg(z0, dim));
        let inner = run_direct_method(&(*p).inner, tau, &point(z0), &stop.into())?;
        Ok(write_out(out, ParaviRunResult { inner }))
    })
}

/// # Safety
/// `r` must come from a run constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn paravi_run_free(r: *mut ParaviRunResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn paravi_run_iterations(r: *const ParaviRunResult) -> u64 {
    if r.is_null() {
        return 0;
    }
    (*r).inner.iterations
}

/// # Safety
/// `r` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn paravi_run_final_residual(r: *const ParaviRunResult) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    (*r).inner.final_residual
}

/// # Safety
/// `r` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn paravi_run_stop_reason(r: *const ParaviRunResult) -> ParaviStopReason {
    if r.is_null() {
        return ParaviStopReason::MaxIters;
    }
    match (*r).inner.stop_reason {
        StopReason::Tol => ParaviStopReason::Tol,
        StopReason::MaxIters => ParaviStopReason::MaxIters,
        StopReason::Stagnation => ParaviStopReason::Stagnation,
    }
}

/// Copy the final iterate into `buf`.
///
/// # Safety
/// `r` must be live; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn paravi_run_final_point(
    r: *const ParaviRunResult,
    buf: *mut f64,
    len: usize,
) -> ParaviStatus {
    if r.is_null() || buf.is_null() {
        set_error("NULL argument");
        return ParaviStatus::NullPointer;
    }
    let final_point = &(*r).inner.final_point;
    if final_point.len() != len {
        set_error(format!(
            "buffer length {len} does not match dimension {}",
            final_point.len()
        ));
        return ParaviStatus::DimensionMismatch;
    }
    ptr::copy_nonoverlapping(final_point.as_slice().as_ptr(), buf, len);
    ParaviStatus::Ok
}

// ---------------------------------------------------------------------------
// Continuous runs
// ---------------------------------------------------------------------------

/// Integrate the second-order smoothed flow. `second` is `x1` under the
/// quarter convention (`explicit_velocity == false`) or the initial velocity
/// (`explicit_velocity == true`).
///
/// # Safety
/// All handles must be live; `x0`, `second` must point to `dim` doubles;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_integrate_second_order(
    p: *const ParaviProblem,
    s: *const ParaviContinuousSchedule,
    x0: *const f64,
    second: *const f64,
    dim: usize,
    explicit_velocity: bool,
    step: f64,
    t_end: f64,
    record_every: usize,
    out: *mut *mut ParaviTrajectory,
) -> ParaviStatus {
    guarded(|| {
        if p.is_null() || s.is_null() {
            set_error("NULL handle");
            return Ok(ParaviStatus::NullPointer);
        }
        let x0 = try_status!(slice_arg(x0, dim));
        let second = try_status!(slice_arg(second, dim));
        let init = if explicit_velocity {
            InitialVelocity::Explicit { v0: point(second) }
        } else {
            InitialVelocity::QuarterConvention { x1: point(second) }
        };
        let cfg = IntegratorConfig::new(step, t_end).with_record_every(record_every.max(1));
        let inner = integrate_second_order(&(*p).inner, &(*s).inner, &point(x0), &init, &cfg)?;
        Ok(write_out(out, ParaviTrajectory { inner }))
    })
}

/// Integrate the feasibility-preserving coupled reformulation from
/// `(x0, x1)`.
///
/// # Safety
/// All handles must be live; `x0`, `x1` must point to `dim` doubles; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paravi_integrate_coupled(
    p: *const ParaviProblem,
    s: *const ParaviContinuousSchedule,
    x0: *const f64,
    x1: *const f64,
    dim: usize,
    step: f64,
    t_end: f64,
    record_every: usize,
    out: *mut *mut ParaviTrajectory,
) -> ParaviStatus {
    guarded(|| {
        if p.is_null() || s.is_null() {
            set_error("NULL handle");
            return Ok(ParaviStatus::NullPointer);
        }
        let x0 = try_status!(slice_arg(x0, dim));
        let x1 = try_status!(slice_arg(x1, dim));
        let cfg = IntegratorConfig::new(step, t_end).with_record_every(record_every.max(1));
        let inner =
            integrate_coupled_feasible(&(*p).inner, &(*s).inner, &point(x0), &point(x1), &cfg)?;
        Ok(write_out(out, ParaviTrajectory { inner }))
    })
}

/// # Safety
/// `t` must come from an integrator and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn paravi_trajectory_free(t: *mut ParaviTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of recorded samples.
///
/// # Safety
/// `t` must be a live trajectory handle.
#[no_mangle]
pub unsafe extern "C" fn paravi_trajectory_len(t: *const ParaviTrajectory) -> usize {
    if t.is_null() {
        return 0;
    }
    (*t).inner.samples.len()
}

/// Read one recorded sample. Any of the out-pointers may be NULL to skip that
/// field; `x_buf`, when given, must hold the problem dimension.
///
/// # Safety
/// `t` must be live; non-NULL out-pointers must be valid; `x_buf` must point
/// to `x_cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn paravi_trajectory_sample(
    t: *const ParaviTrajectory,
    index: usize,
    time: *mut f64,
    x_buf: *mut f64,
    x_cap: usize,
    residual: *mut f64,
    feas_violation: *mut f64,
    speed: *mut f64,
) -> ParaviStatus {
    if t.is_null() {
        set_error("NULL handle");
        return ParaviStatus::NullPointer;
    }
    let traj = &(*t).inner;
    let Some(s) = traj.samples.get(index) else {
        set_error(format!("sample index {index} out of range {}", traj.samples.len()));
        return ParaviStatus::InvalidArgument;
    };
    if !time.is_null() {
        *time = s.t;
    }
    if !x_buf.is_null() {
        if x_cap < s.x.len() {
            set_error(format!("x_cap {x_cap} below dimension {}", s.x.len()));
            return ParaviStatus::DimensionMismatch;
        }
        ptr::copy_nonoverlapping(s.x.as_slice().as_ptr(), x_buf, s.x.len());
    }
    if !residual.is_null() {
        *residual = s.residual;
    }
    if !feas_violation.is_null() {
        *feas_violation = s.feas_violation;
    }
    if !speed.is_null() {
        *speed = s.speed;
    }
    ParaviStatus::Ok
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Closed-form counterexample position `1 + e^{-t}(cos t + sin t)`.
#[no_mangle]
pub extern "C" fn paravi_counterexample_oracle(t: f64) -> f64 {
    paravi::continuous::counterexample_oracle(t)
}
