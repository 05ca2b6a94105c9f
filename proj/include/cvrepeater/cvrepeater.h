// Copyright 2026 The cvrepeater Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVREPEATER_H
#define CVREPEATER_H

#include <stddef.h>
#include <stdint.h>

#if defined(CVR_BUILDING_LIBRARY)
#define CVR_API __attribute__((visibility("default")))
#else
#define CVR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure cvr_last_error() holds a
 * message for the calling thread. Output pointers are untouched on failure. */
typedef enum cvr_status {
    CVR_OK = 0,
    CVR_ERR_ARGUMENT = 1,
    CVR_ERR_DOMAIN = 2,
    CVR_ERR_DEGENERATE = 3,
    CVR_ERR_CONVERGENCE = 4,
    CVR_ERR_SUBCRITICAL = 5,
    CVR_ERR_NUMERICAL = 6,
    CVR_ERR_NULL_POINTER = 7,
    CVR_ERR_INTERNAL = 8
} cvr_status;

CVR_API const char *cvr_version(void);
CVR_API const char *cvr_status_name(cvr_status status);
CVR_API const char *cvr_last_error(void);

/* Non-fatal diagnostics raised by the most recent call on this thread. */
CVR_API size_t cvr_warning_count(void);
CVR_API const char *cvr_warning(size_t index);

/* Worker threads for sweeps; 0 restores the default (CVR_NUM_THREADS or hardware). */
CVR_API void cvr_set_num_threads(int n);
CVR_API int cvr_num_threads(void);

CVR_API cvr_status cvr_transmissivity(double distance_km, double alpha_db_per_km, double *t);

/* ---- Density operators ------------------------------------------------- */

typedef struct cvr_density cvr_density;

CVR_API size_t cvr_density_dim(const cvr_density *rho);
CVR_API size_t cvr_density_num_modes(const cvr_density *rho);
CVR_API cvr_status cvr_density_cutoffs(const cvr_density *rho, int *cutoffs, size_t len);
CVR_API cvr_status cvr_density_entropy(const cvr_density *rho, double *bits);
/* Marginal of mode `mode` (0 or 1); result must be freed. */
CVR_API cvr_status cvr_density_marginal(const cvr_density *rho, size_t mode, cvr_density **out);
/* Row-major copy; len must be at least dim*dim. im may be NULL. */
CVR_API cvr_status cvr_density_copy(const cvr_density *rho, double *re, double *im, size_t len);
CVR_API cvr_status cvr_density_trace_distance(const cvr_density *a, const cvr_density *b, double *d);
CVR_API void cvr_density_free(cvr_density *rho);

/* ---- Single link ------------------------------------------------------- */

typedef struct cvr_link_params {
    double mu;
    double t;
    double kappa;
    int n_scissors;
} cvr_link_params;

typedef struct cvr_link_report {
    double probability;
    double entropy_joint;    /* bits */
    double entropy_marginal; /* bits */
    double rci;              /* bits, may be negative */
    double true_rci;         /* bits x probability, clamped at 0 */
} cvr_link_report;

CVR_API cvr_status cvr_link_evaluate(const cvr_link_params *params, cvr_link_report *out);
CVR_API cvr_status cvr_link_zeta(const cvr_link_params *params, int m, int u, double *out);
CVR_API cvr_status cvr_link_heralded_state(const cvr_link_params *params, int cutoff, cvr_density **out);
/* Same state from the simulated optical circuit. */
CVR_API cvr_status cvr_link_circuit_state(const cvr_link_params *params, int cutoff, cvr_density **out,
                                          double *probability);

/* ---- Swap gadget ------------------------------------------------------- */

typedef enum cvr_f23_model {
    CVR_F23_CLOSED_FORM = 0,
    CVR_F23_CIRCUIT = 1,       /* mean-field photon subtraction */
    CVR_F23_CIRCUIT_EXACT = 2  /* full cos(theta) sin(theta)^n a subtraction */
} cvr_f23_model;

CVR_API cvr_status cvr_swap_p_phys(double xi, double theta, double *p);
CVR_API cvr_status cvr_swap_optimize(double xi, double *theta, double *p);
/* F23 ket amplitudes over |n2, n3>, row-major, (cutoff+1)^2 entries. */
CVR_API cvr_status cvr_swap_f23(double theta, double lam, int cutoff, cvr_f23_model model, double *re, size_t len);

/* ---- Repeater chain ---------------------------------------------------- */

typedef enum cvr_recursion { CVR_RECURSION_EXACT = 0, CVR_RECURSION_PRINTED = 1 } cvr_recursion;
typedef enum cvr_swap_cost { CVR_SWAP_COST_PHYSICAL = 0, CVR_SWAP_COST_IDEAL = 1 } cvr_swap_cost;

typedef struct cvr_chain_params {
    double mu;
    double t_link;
    double kappa;
    double q; /* negative selects 1/xi */
    int x;    /* 2^x links */
    cvr_recursion recursion;
    int cutoff;
} cvr_chain_params;

CVR_API void cvr_chain_params_init(cvr_chain_params *params);

typedef struct cvr_chain_report {
    double rci;
    double entropy_joint;
    double entropy_marginal;
    double p_sciss;
    double q;
    double xi;
    double rho;
    double p_swap_product; /* product over the balanced tree of P_Pi */
    size_t levels;
} cvr_chain_report;

/* swap_probs receives min(cap, x) per-level P_Pi values; may be NULL. */
CVR_API cvr_status cvr_chain_evaluate(const cvr_chain_params *params, cvr_chain_report *out, double *swap_probs,
                                      size_t cap);
CVR_API cvr_status cvr_chain_density(const cvr_chain_params *params, cvr_density **out);
CVR_API cvr_status cvr_chain_rate(const cvr_chain_params *params, double M, cvr_swap_cost cost, double *rate);

/* ---- Rates ------------------------------------------------------------- */

CVR_API cvr_status cvr_capacity_direct(double eta, double *out);
CVR_API cvr_status cvr_p_multiplexed(double c, double eta, double n, double M, double *out);
CVR_API cvr_status cvr_rate_dv(double M, double n, double p_swap, double c, double eta, double *out);
CVR_API cvr_status cvr_tau_exponent(double M, double c, double p_swap, double *out);
CVR_API cvr_status cvr_solve_z(double M, double c, double p_swap, double *z, double *residual);
CVR_API cvr_status cvr_envelope_exponent(double M, double c, double p_swap, double *s);

typedef enum cvr_envelope_mode { CVR_MODE_DV = 0, CVR_MODE_GENERAL = 1 } cvr_envelope_mode;

typedef struct cvr_envelope_config {
    cvr_envelope_mode mode;
    double M;
    double rep_rate;
    double alpha_db_per_km;
    double distance_min_km;
    double distance_max_km;
    double distance_step_km;
    int x_max;
    double p_swap;
    double c;
    double mu;
    double kappa_coeff;
    double kappa_exp;
    double q;
    int cutoff;
    cvr_swap_cost swap_cost;
    cvr_recursion recursion;
} cvr_envelope_config;

CVR_API void cvr_envelope_config_init(cvr_envelope_config *config, cvr_envelope_mode mode);

typedef struct cvr_envelope cvr_envelope;

typedef struct cvr_envelope_summary {
    size_t num_points;
    size_t num_curves;
    double s_fit;
    double s_fit_r2;
    double fit_lo_km;
    double fit_hi_km;
    int supercritical;
    double s_exact;
    double tau;
    double z;
    int advantage;
    double l_cross_km;
    double r_cross_ebps;
} cvr_envelope_summary;

typedef enum cvr_series {
    CVR_SERIES_ENVELOPE = 0,
    CVR_SERIES_POINTWISE_MAX = 1,
    CVR_SERIES_DIRECT = 2
} cvr_series;

CVR_API cvr_status cvr_envelope_build(const cvr_envelope_config *config, cvr_envelope **out);
CVR_API cvr_status cvr_envelope_summary_get(const cvr_envelope *env, cvr_envelope_summary *out);
CVR_API cvr_status cvr_envelope_distances(const cvr_envelope *env, double *out, size_t len);
CVR_API cvr_status cvr_envelope_curve(const cvr_envelope *env, size_t curve, int *n_rep, double *out, size_t len);
CVR_API cvr_status cvr_envelope_series_get(const cvr_envelope *env, cvr_series series, double *out, size_t len);
CVR_API void cvr_envelope_free(cvr_envelope *env);

/* ---- Optimization ------------------------------------------------------ */

typedef enum cvr_objective { CVR_OBJECTIVE_TRUE_RCI = 0, CVR_OBJECTIVE_RCI = 1 } cvr_objective;

typedef struct cvr_opt_domain {
    double mu_lo;
    double mu_hi;
    double kappa_lo;
    double kappa_hi;
    int grid;
    double simplex_scale;
} cvr_opt_domain;

typedef struct cvr_opt_result {
    double mu;
    double kappa;
    double value;
    double probability;
    double rci;
    double grid_best;
    long evaluations;
    int converged;
    int all_negative;
} cvr_opt_result;

CVR_API void cvr_opt_domain_init(cvr_opt_domain *domain);
/* domain may be NULL for the defaults. */
CVR_API cvr_status cvr_optimize_link(double t, int n_scissors, cvr_objective objective, const cvr_opt_domain *domain,
                                     cvr_opt_result *out);
CVR_API cvr_status cvr_fit_power_law(const double *t, const double *v, size_t n, double *exponent,
                                     double *prefactor, double *r2);

/* ---- Oracle verification ----------------------------------------------- */

typedef struct cvr_verify_config {
    int cutoff;
    int points;
    uint64_t seed;
    double inject_kappa_error;
} cvr_verify_config;

typedef struct cvr_check {
    const char *name; /* valid until the report is freed */
    double residual;
    double tolerance;
    int passed;
    const char *note;
} cvr_check;

typedef struct cvr_verify_report cvr_verify_report;

CVR_API void cvr_verify_config_init(cvr_verify_config *config);
CVR_API cvr_status cvr_verify_run(const cvr_verify_config *config, cvr_verify_report **out);
CVR_API size_t cvr_verify_check_count(const cvr_verify_report *report);
CVR_API cvr_status cvr_verify_check(const cvr_verify_report *report, size_t index, cvr_check *out);
CVR_API size_t cvr_verify_worst(const cvr_verify_report *report);
CVR_API size_t cvr_verify_warning_count(const cvr_verify_report *report);
CVR_API const char *cvr_verify_warning(const cvr_verify_report *report, size_t index);
CVR_API int cvr_verify_all_passed(const cvr_verify_report *report);
CVR_API void cvr_verify_free(cvr_verify_report *report);

#ifdef __cplusplus
}
#endif

#endif
