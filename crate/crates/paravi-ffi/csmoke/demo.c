/* Minimal C consumer of the paravi ABI.
 *
 * Build (from the workspace root):
 *   cargo build --release -p paravi-ffi
 *   cc crates/paravi-ffi/csmoke/demo.c \
 *      -Icrates/paravi-ffi/include \
 *      target/release/libparavi_ffi.a -lm -o demo
 */
#include <stdio.h>
#include <string.h>

#include "paravi.h"

static void die(const char *what) {
  char msg[256];
  paravi_last_error(msg, sizeof msg);
  fprintf(stderr, "%s: %s\n", what, msg);
}

int main(void) {
  ParaviProblem *prob = NULL;
  if (paravi_problem_builtin("paper-sec5", &prob) != PARAVI_STATUS_OK) {
    die("problem");
    return 1;
  }

  ParaviDiscreteSchedule *sched = NULL;
  if (paravi_schedule_powerlaw_d(0.5, 0.5, 1.0, 1.0, 0.5, NULL, &sched) !=
      PARAVI_STATUS_OK) {
    die("schedule");
    return 1;
  }

  double q1, q2;
  paravi_schedule_q_constants(sched, &q1, &q2);
  printf("Q1 = %.6f, Q2 = %.6f\n", q1, q2);

  double z0[3] = {1.0, 0.0, 0.0};
  double z1[3] = {0.0, 1.0, 0.0};
  ParaviStopRule stop = {1e-3, 1000000, 0.0, 10};
  ParaviRunResult *run = NULL;
  if (paravi_run_inertial(prob, sched, z0, z1, 3, stop, &run) !=
      PARAVI_STATUS_OK) {
    die("run");
    return 1;
  }

  double z[3];
  paravi_run_final_point(run, z, 3);
  printf("stopped after %llu iterations, residual %.3e at (%.4f, %.4f, %.4f)\n",
         (unsigned long long)paravi_run_iterations(run),
         paravi_run_final_residual(run), z[0], z[1], z[2]);

  int ok = paravi_run_stop_reason(run) == PARAVI_STOP_REASON_TOL;
  paravi_run_free(run);
  paravi_schedule_discrete_free(sched);
  paravi_problem_free(prob);
  return ok ? 0 : 1;
}
