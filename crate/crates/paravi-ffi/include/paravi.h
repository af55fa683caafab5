#ifndef PARAVI_H
#define PARAVI_H

/* Generated by cbindgen from crates/paravi-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum ParaviStatus {
  PARAVI_STATUS_OK = 0,
  PARAVI_STATUS_NULL_POINTER = 1,
  PARAVI_STATUS_UTF8 = 2,
  PARAVI_STATUS_INVALID_ARGUMENT = 3,
  PARAVI_STATUS_DIMENSION_MISMATCH = 4,
  PARAVI_STATUS_VALIDATION_FAILED = 5,
  PARAVI_STATUS_DIVERGENCE = 6,
  PARAVI_STATUS_IO = 7,
  PARAVI_STATUS_PANIC = 8,
} ParaviStatus;

// Reason a discrete run stopped.
typedef enum ParaviStopReason {
  PARAVI_STOP_REASON_TOL = 0,
  PARAVI_STOP_REASON_MAX_ITERS = 1,
  PARAVI_STOP_REASON_STAGNATION = 2,
} ParaviStopReason;

// Opaque continuous-schedule handle.
typedef struct ParaviContinuousSchedule ParaviContinuousSchedule;

// Opaque discrete-schedule handle.
typedef struct ParaviDiscreteSchedule ParaviDiscreteSchedule;

// Opaque problem handle.
typedef struct ParaviProblem ParaviProblem;

// Opaque result of a discrete run.
typedef struct ParaviRunResult ParaviRunResult;

// Opaque continuous trajectory.
typedef struct ParaviTrajectory ParaviTrajectory;

// Stopping rule for the discrete solvers.
typedef struct ParaviStopRule {
  double residual_tol;
  uint64_t max_iters;
  // `0` disables the stagnation check.
  double stagnation_tol;
  uint64_t stagnation_window;
} ParaviStopRule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message into `buf` (NUL-terminated, truncated to
// `cap`). Returns the full message length in bytes, excluding the NUL.
//
// # Safety
// `buf` must point to `cap` writable bytes (or be NULL with `cap == 0`).
size_t paravi_last_error(char *buf, size_t cap);

// Create a bundled problem: `paper-sec5`, `remark-counterexample` or
// `identity-ball`.
//
// # Safety
// `id` must be a NUL-terminated string; `out` must be a valid pointer.
enum ParaviStatus paravi_problem_builtin(const char *id, struct ParaviProblem **out);

// Create a problem from the JSON document format described in the README.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum ParaviStatus paravi_problem_from_json(const char *json, struct ParaviProblem **out);

// # Safety
// `p` must come from a problem constructor and not have been freed.
void paravi_problem_free(struct ParaviProblem *p);

// # Safety
// `p` must be a live problem handle; `out` must be a valid pointer.
enum ParaviStatus paravi_problem_dimension(const struct ParaviProblem *p, size_t *out);

// Natural residual `‖x − P(x − U(x))‖` at `x`.
//
// # Safety
// `p` must be live; `x` must point to `len` doubles; `out` must be valid.
enum ParaviStatus paravi_natural_residual(const struct ParaviProblem *p,
                                          const double *x,
                                          size_t len,
                                          double *out);

// Euclidean projection onto the problem's feasible set, written in place.
//
// # Safety
// `p` must be live; `x` must point to `len` writable doubles.
enum ParaviStatus paravi_project(const struct ParaviProblem *p, double *x, size_t len);

// Build the continuous vanishing-delta power-law family.
//
// # Safety
// `out` must be a valid pointer.
enum ParaviStatus paravi_schedule_powerlaw_a(double h,
                                             double s,
                                             double p,
                                             double q,
                                             double t0,
                                             struct ParaviContinuousSchedule **out);

// Build the continuous constant-delta power-law family.
//
// # Safety
// `out` must be a valid pointer.
enum ParaviStatus paravi_schedule_powerlaw_b(double h,
                                             double s,
                                             double q,
                                             double u,
                                             double t0,
                                             struct ParaviContinuousSchedule **out);

// # Safety
// `s` must come from a schedule constructor and not have been freed.
void paravi_schedule_continuous_free(struct ParaviContinuousSchedule *s);

// Build the discrete power-law family. Pass `omega = NULL` for the default
// shift (lower bound + 1).
//
// # Safety
// `omega` must be NULL or point to one double; `out` must be valid.
enum ParaviStatus paravi_schedule_powerlaw_d(double p,
                                             double q,
                                             double delta,
                                             double theta,
                                             double lambda,
                                             const double *omega,
                                             struct ParaviDiscreteSchedule **out);

// # Safety
// `s` must come from a schedule constructor and not have been freed.
void paravi_schedule_discrete_free(struct ParaviDiscreteSchedule *s);

// Contraction constants `(Q1, Q2)` of a power-law discrete schedule.
//
// # Safety
// `s` must be live; `q1`, `q2` must be valid pointers.
enum ParaviStatus paravi_schedule_q_constants(const struct ParaviDiscreteSchedule *s,
                                              double *q1,
                                              double *q2);

// Check the discrete admissibility conditions up to `horizon` (`0` uses the
// default). `satisfied` receives the verdict; the call itself fails only on
// bad inputs.
//
// # Safety
// `s` must be live; `satisfied` must be a valid pointer.
enum ParaviStatus paravi_validate_discrete(const struct ParaviDiscreteSchedule *s,
                                           double q1,
                                           double q2,
                                           uint64_t horizon,
                                           bool *satisfied);

// Run the inertial iteration from `(z0, z1)`.
//
// # Safety
// All handles must be live; `z0`, `z1` must point to `dim` doubles; `out`
// must be a valid pointer.
enum ParaviStatus paravi_run_inertial(const struct ParaviProblem *p,
                                      const struct ParaviDiscreteSchedule *s,
                                      const double *z0,
                                      const double *z1,
                                      size_t dim,
                                      struct ParaviStopRule stop,
                                      struct ParaviRunResult **out);

// Run the direct projected-step baseline with `beta0(n) = n^{-tau}`.
//
// # Safety
// `p` must be live; `z0` must point to `dim` doubles; `out` must be valid.
enum ParaviStatus paravi_run_direct(const struct ParaviProblem *p,
                                    double tau,
                                    const double *z0,
                                    size_t dim,
                                    struct ParaviStopRule stop,
                                    struct ParaviRunResult **out);

// # Safety
// `r` must come from a run constructor and not have been freed.
void paravi_run_free(struct ParaviRunResult *r);

// # Safety
// `r` must be a live run handle.
uint64_t paravi_run_iterations(const struct ParaviRunResult *r);

// # Safety
// `r` must be a live run handle.
double paravi_run_final_residual(const struct ParaviRunResult *r);

// # Safety
// `r` must be a live run handle.
enum ParaviStopReason paravi_run_stop_reason(const struct ParaviRunResult *r);

// Copy the final iterate into `buf`.
//
// # Safety
// `r` must be live; `buf` must point to `len` writable doubles.
enum ParaviStatus paravi_run_final_point(const struct ParaviRunResult *r, double *buf, size_t len);

// Integrate the second-order smoothed flow. `second` is `x1` under the
// quarter convention (`explicit_velocity == false`) or the initial velocity
// (`explicit_velocity == true`).
//
// # Safety
// All handles must be live; `x0`, `second` must point to `dim` doubles;
// `out` must be a valid pointer.
enum ParaviStatus paravi_integrate_second_order(const struct ParaviProblem *p,
                                                const struct ParaviContinuousSchedule *s,
                                                const double *x0,
                                                const double *second,
                                                size_t dim,
                                                bool explicit_velocity,
                                                double step,
                                                double t_end,
                                                size_t record_every,
                                                struct ParaviTrajectory **out);

// Integrate the feasibility-preserving coupled reformulation from
// `(x0, x1)`.
//
// # Safety
// All handles must be live; `x0`, `x1` must point to `dim` doubles; `out`
// must be a valid pointer.
enum ParaviStatus paravi_integrate_coupled(const struct ParaviProblem *p,
                                           const struct ParaviContinuousSchedule *s,
                                           const double *x0,
                                           const double *x1,
                                           size_t dim,
                                           double step,
                                           double t_end,
                                           size_t record_every,
                                           struct ParaviTrajectory **out);

// # Safety
// `t` must come from an integrator and not have been freed.
void paravi_trajectory_free(struct ParaviTrajectory *t);

// Number of recorded samples.
//
// # Safety
// `t` must be a live trajectory handle.
size_t paravi_trajectory_len(const struct ParaviTrajectory *t);

// Read one recorded sample. Any of the out-pointers may be NULL to skip that
// field; `x_buf`, when given, must hold the problem dimension.
//
// # Safety
// `t` must be live; non-NULL out-pointers must be valid; `x_buf` must point
// to `x_cap` writable doubles.
enum ParaviStatus paravi_trajectory_sample(const struct ParaviTrajectory *t,
                                           size_t index,
                                           double *time,
                                           double *x_buf,
                                           size_t x_cap,
                                           double *residual,
                                           double *feas_violation,
                                           double *speed);

// Closed-form counterexample position `1 + e^{-t}(cos t + sin t)`.
double paravi_counterexample_oracle(double t);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PARAVI_H */
