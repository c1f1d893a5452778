/* C interface to the tricycle cycle numerics. */

#ifndef TRICYCLE_H
#define TRICYCLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of an FFI call.
 */
typedef enum TricycleStatus {
  TRICYCLE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TRICYCLE_STATUS_NULL_POINTER = 1,
  /**
   * The configuration or an argument was rejected.
   */
  TRICYCLE_STATUS_INVALID_INPUT = 2,
  /**
   * The requested point has no solution (no positive root or an
   * unreachable COP target).
   */
  TRICYCLE_STATUS_INFEASIBLE = 3,
  /**
   * The numerics failed internally.
   */
  TRICYCLE_STATUS_NUMERICAL_FAILURE = 4,
} TricycleStatus;

/**
 * Opaque handle holding the run configuration and a cache of the
 * duration-independent branch functionals per spectral exponent.
 */
typedef struct TricycleSystem TricycleSystem;

/**
 * Cycle-level metrics at one grid point. Branch arrays are in cycle order
 * (cold, hot, auxiliary).
 */
typedef struct TricycleMetrics {
  double eps;
  double eps_r;
  double cooling_rate;
  double tau;
  double d_s_en;
  double lbar2;
  double lh;
  double rh;
  double psi;
  double psi_r;
  double eta;
  double eta_c;
  double power;
  double work;
  double heats[3];
  double sigmas[3];
  double lengths[3];
} TricycleMetrics;

/**
 * A fixed-COP time allocation.
 */
typedef struct TricycleAllocation {
  double tau_c;
  double tau_h;
  double tau_p;
  double residual;
} TricycleAllocation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. Borrowed;
 * overwritten by the next failing call.
 */
const char *tricycle_last_error(void);

/**
 * Library version as a static string.
 */
const char *tricycle_version(void);

/**
 * New system with the built-in default parameter set.
 */
struct TricycleSystem *tricycle_system_default(void);

/**
 * New system from a JSON configuration document (same schema as the CLI
 * `--config` file). Returns null and sets the error message on failure.
 *
 * # Safety
 * `json` must be a valid NUL-terminated C string, or null.
 */
struct TricycleSystem *tricycle_system_from_json(const char *json);

/**
 * Releases a system created by the constructors above. Null is ignored.
 *
 * # Safety
 * `sys` must originate from `tricycle_system_default` or
 * `tricycle_system_from_json` and must not be used afterwards.
 */
void tricycle_system_free(struct TricycleSystem *sys);

/**
 * Quench closure: (ζ_p, δ_h, δ_p) from the temperatures, ζ_c, ζ_h and δ_c.
 *
 * # Safety
 * The three output pointers must be valid for writes.
 */
enum TricycleStatus tricycle_close_parameters(double t_c,
                                              double t_h,
                                              double t_p,
                                              double zeta_c,
                                              double zeta_h,
                                              double delta_c,
                                              double *zeta_p_out,
                                              double *delta_h_out,
                                              double *delta_p_out);

/**
 * Solves the time-constraint equation for τ_h at (τ_c, τ_p).
 *
 * # Safety
 * `sys` must be a live system handle and `tau_h_out` valid for writes.
 */
enum TricycleStatus tricycle_solve_tau_h(const struct TricycleSystem *sys,
                                         double alpha,
                                         double tau_c,
                                         double tau_p,
                                         double *tau_h_out);

/**
 * Full cycle metrics at explicit durations.
 *
 * # Safety
 * `sys` must be a live system handle and `out` valid for writes.
 */
enum TricycleStatus tricycle_cycle_metrics(const struct TricycleSystem *sys,
                                           double alpha,
                                           double tau_c,
                                           double tau_h,
                                           double tau_p,
                                           struct TricycleMetrics *out);

/**
 * Fixed-COP allocation: τ_h from the COP relation, τ_p from the
 * constraint equation.
 *
 * # Safety
 * `sys` must be a live system handle and `out` valid for writes.
 */
enum TricycleStatus tricycle_optimize_fixed_cop(const struct TricycleSystem *sys,
                                                double alpha,
                                                double tau_c,
                                                double eps_target,
                                                struct TricycleAllocation *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRICYCLE_H */
