/*
 * Copyright (C) 2026 licsctl authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the three-pulse LICS simulator and pulse-schedule optimizer.
 *
 * Every fallible call returns a lics_status. On failure the message is
 * available from lics_last_error() on the same thread until the next call.
 * Objects behind opaque handles are owned by the caller and released with the
 * matching *_free function. Strings returned by the library stay valid for
 * the lifetime of the object (or forever, for static tables).
 */
#ifndef LICS_LICS_H
#define LICS_LICS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LICS_BUILDING_LIBRARY)
#    define LICS_API __declspec(dllexport)
#  else
#    define LICS_API __declspec(dllimport)
#  endif
#else
#  define LICS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lics_status {
    LICS_OK = 0,
    LICS_ERR_INVALID_ARGUMENT = 1, /* bad input, unknown name, failed validation */
    LICS_ERR_NUMERICAL = 2,        /* integration or eigen-solver failure */
    LICS_ERR_INTERNAL = 3
} lics_status;

typedef struct lics_complex {
    double re;
    double im;
} lics_complex;

typedef struct lics_state {
    lics_complex a_m;
    lics_complex a_n;
    lics_complex a_f;
    double W;
    double T;
} lics_state;

typedef struct lics_params {
    double eta_m, eta_n, eta_f;
    double delta_mn, delta_nf;
    double q_nn, q_ff, q_nf;
} lics_params;

typedef struct lics_schedule {
    double g_mn0, g_nn0, g_ff0;
    double g_nf0;   /* ignored when g_nf_auto != 0 */
    int g_nf_auto;  /* nonzero: g_nf = sqrt(g_nn g_ff) */
    double delta2, delta3;
    double d2, d3;
    int e1_enabled, e2_enabled, e3_enabled;
} lics_schedule;

typedef struct lics_couplings {
    double g_mn, g_nn, g_ff, g_nf;
} lics_couplings;

typedef struct lics_integrator_config {
    double rel_tol, abs_tol, max_step;
    double t_start, t_end;
    uint64_t max_steps;
} lics_integrator_config;

typedef struct lics_scenario {
    lics_schedule schedule;
    lics_params params;
    lics_state init;
    lics_integrator_config integrator;
} lics_scenario;

typedef struct lics_observables {
    double pop_m, pop_n, pop_f, W, sum_total;
} lics_observables;

typedef struct lics_dimensional {
    double gamma_m, gamma_n, gamma_f;
    double tau;
    double Omega_mn, Omega_nf;
    double gamma_nn, gamma_ff, gamma_nf;
    double G_mn;
} lics_dimensional;

typedef struct lics_derivative {
    lics_complex da_m, da_n, da_f;
    double dW;
} lics_derivative;

LICS_API const char* lics_version(void);
LICS_API const char* lics_last_error(void);

/* ---- defaults, presets, parameter paths ---------------------------------- */

LICS_API void lics_default_integrator_config(lics_integrator_config* out);
LICS_API void lics_default_scenario(lics_scenario* out);

LICS_API size_t lics_preset_count(void);
LICS_API const char* lics_preset_name(size_t index);
LICS_API const char* lics_preset_description(size_t index);
LICS_API lics_status lics_preset(const char* name, lics_scenario* out);

LICS_API size_t lics_parameter_path_count(void);
LICS_API const char* lics_parameter_path(size_t index);
LICS_API lics_status lics_scenario_get(const lics_scenario* s, const char* path, double* value);
LICS_API lics_status lics_scenario_set(lics_scenario* s, const char* path, double value);
LICS_API lics_status lics_scenario_validate(const lics_scenario* s);
/* Widens the integration window to give every pulse 4 durations of margin. */
LICS_API lics_status lics_scenario_cover_window(lics_scenario* s);

/* ---- pulses and dynamics -------------------------------------------------- */

LICS_API lics_status lics_couplings_at(const lics_schedule* s, double T, lics_couplings* out);
LICS_API lics_status lics_peak_cross_coupling(const lics_schedule* s, double* out);
LICS_API lics_status lics_rhs(const lics_state* state, const lics_couplings* c,
                              const lics_params* p, lics_derivative* out);
LICS_API lics_status lics_scale_to_dimensionless(const lics_dimensional* in,
                                                 lics_params* params_out,
                                                 lics_couplings* peaks_out);
LICS_API double lics_conservation_slack(const lics_integrator_config* cfg);

typedef struct lics_trajectory lics_trajectory;

/* Integrates with exactly the scenario's window. `times` (ascending, inside the
 * window) may be NULL for final-state-only output; the final state is always
 * the last sample. */
LICS_API lics_status lics_integrate(const lics_scenario* s, const double* times, size_t n_times,
                                    lics_trajectory** out);
/* Uniformly sampled variant: `count` >= 2 points over the window. */
LICS_API lics_status lics_integrate_uniform(const lics_scenario* s, size_t count,
                                            lics_trajectory** out);
/* Time-independent couplings (the schedule is ignored). */
LICS_API lics_status lics_integrate_constant(const lics_couplings* c, const lics_scenario* s,
                                             const double* times, size_t n_times,
                                             lics_trajectory** out);
LICS_API size_t lics_trajectory_size(const lics_trajectory* t);
LICS_API lics_status lics_trajectory_get(const lics_trajectory* t, size_t index,
                                         lics_state* out);
LICS_API size_t lics_trajectory_warning_count(const lics_trajectory* t);
LICS_API const char* lics_trajectory_warning(const lics_trajectory* t, size_t index);
LICS_API void lics_trajectory_free(lics_trajectory* t);

/* Final observables with the window widened to cover every pulse. */
LICS_API lics_status lics_evaluate(const lics_scenario* s, lics_observables* out);

/* Closed-form propagation with frozen couplings; `out` receives a_m, a_n, a_f
 * at time T (W and T fields are set to NaN and T). */
LICS_API lics_status lics_constant_solution(const lics_couplings* c, const lics_params* p,
                                            const lics_state* init, double T, lics_state* out);

/* ---- sweeps --------------------------------------------------------------- */

typedef struct lics_sweep_spec lics_sweep_spec;
typedef struct lics_sweep_result lics_sweep_result;

LICS_API lics_sweep_spec* lics_sweep_spec_new(const lics_scenario* base);
LICS_API void lics_sweep_spec_free(lics_sweep_spec* spec);
/* axis is 1 or 2; path "T" (axis 2 only) samples the trajectory in time. */
LICS_API lics_status lics_sweep_spec_set_axis(lics_sweep_spec* spec, int axis, const char* path,
                                              double min, double max, size_t count);
LICS_API lics_status lics_sweep_spec_add_observable(lics_sweep_spec* spec, const char* name);
/* Replaces the base scenario, keeping axes and observables. */
LICS_API lics_status lics_sweep_spec_set_base(lics_sweep_spec* spec, const lics_scenario* base);
LICS_API void lics_sweep_spec_set_permit_partial(lics_sweep_spec* spec, int permit);
/* Fills the spec's axes and observables from a preset's figure descriptor. */
LICS_API lics_status lics_sweep_spec_from_preset(const char* preset, lics_sweep_spec** out);

/* workers == 0 uses the machine's hardware concurrency. */
LICS_API lics_status lics_sweep_run(const lics_sweep_spec* spec, unsigned workers,
                                    lics_sweep_result** out);
LICS_API void lics_sweep_result_free(lics_sweep_result* r);
LICS_API size_t lics_sweep_result_rows(const lics_sweep_result* r);
LICS_API size_t lics_sweep_result_cols(const lics_sweep_result* r);
/* axis2 values are absent (NULL, size 0) for a 1D sweep. */
LICS_API const double* lics_sweep_result_axis(const lics_sweep_result* r, int axis, size_t* n);
LICS_API const char* lics_sweep_result_axis_path(const lics_sweep_result* r, int axis);
LICS_API size_t lics_sweep_result_observable_count(const lics_sweep_result* r);
LICS_API const char* lics_sweep_result_observable(const lics_sweep_result* r, size_t index);
/* Row-major rows x cols matrix; NULL if the observable was not requested. */
LICS_API const double* lics_sweep_result_matrix(const lics_sweep_result* r, const char* observable);
LICS_API size_t lics_sweep_result_failed_count(const lics_sweep_result* r);
LICS_API lics_status lics_sweep_result_failed(const lics_sweep_result* r, size_t index,
                                              size_t* i, size_t* j, const char** message);
LICS_API double lics_sweep_result_wall_seconds(const lics_sweep_result* r);

/* ---- optimization --------------------------------------------------------- */

typedef struct lics_objective lics_objective;
typedef struct lics_optimize_result lics_optimize_result;

LICS_API lics_objective* lics_objective_new(const lics_scenario* base);
LICS_API void lics_objective_free(lics_objective* o);
/* observable: pop_m, pop_n, pop_f or W. */
LICS_API lics_status lics_objective_add_target(lics_objective* o, const char* observable,
                                               double value, double weight);
LICS_API lics_status lics_objective_add_free(lics_objective* o, const char* path, double min,
                                             double max);
LICS_API lics_status lics_objective_set_initial(lics_objective* o, const double* x, size_t n);
LICS_API size_t lics_objective_minimum_budget(const lics_objective* o);
/* Checks targets, bounds, the initial point and the base scenario. */
LICS_API lics_status lics_objective_validate(const lics_objective* o);

LICS_API lics_status lics_optimize(const lics_objective* o, size_t budget, uint64_t seed,
                                   unsigned workers, lics_optimize_result** out);
LICS_API void lics_optimize_result_free(lics_optimize_result* r);
LICS_API const double* lics_optimize_result_best(const lics_optimize_result* r, size_t* n);
LICS_API void lics_optimize_result_achieved(const lics_optimize_result* r, lics_observables* out);
LICS_API double lics_optimize_result_objective(const lics_optimize_result* r);
LICS_API size_t lics_optimize_result_evaluations(const lics_optimize_result* r);
LICS_API int lics_optimize_result_converged(const lics_optimize_result* r);
LICS_API const double* lics_optimize_result_trace(const lics_optimize_result* r, size_t* n);
/* The base scenario with the best parameters applied. */
LICS_API void lics_optimize_result_scenario(const lics_optimize_result* r, lics_scenario* out);

#ifdef __cplusplus
}
#endif

#endif /* LICS_LICS_H */
