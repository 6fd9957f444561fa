#ifndef DINV_DINV_H
#define DINV_DINV_H

/* C interface to the d-inverse library. Every call returns a dinv_status;
 * on failure dinv_last_error() holds a message for the calling thread.
 * Handles are opaque and released with the matching *_free function
 * (NULL is accepted). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DINV_API __declspec(dllexport)
#else
#define DINV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dinv_status {
  DINV_OK = 0,
  DINV_ERR_DOMAIN = 1,
  DINV_ERR_EVALUATION = 2,
  DINV_ERR_INCONSISTENT = 3,
  DINV_ERR_NOT_D_INCREASING = 4,
  DINV_ERR_CLASSIFICATION = 5,
  DINV_ERR_DEGENERATE_TIME_CHANGE = 6,
  DINV_ERR_IO = 7,
  DINV_ERR_NULL_ARGUMENT = 8,
  DINV_ERR_BUFFER_TOO_SMALL = 9,
  DINV_ERR_INTERNAL = 99
} dinv_status;

typedef struct dinv_drift dinv_drift;
typedef struct dinv_law dinv_law;
typedef struct dinv_family dinv_family;
typedef struct dinv_report dinv_report;
typedef struct dinv_gbm dinv_gbm;

DINV_API const char* dinv_version(void);
DINV_API const char* dinv_status_name(dinv_status status);
DINV_API const char* dinv_last_error(void);
/* Extra payload of the last error, e.g. the limit profile as JSON after a
 * classification failure. Empty string when there is none. */
DINV_API const char* dinv_last_error_detail(void);
DINV_API uint64_t dinv_default_seed(void);

/* Drifts */

typedef double (*dinv_drift_fn)(double t, void* user);

DINV_API dinv_status dinv_drift_zero(dinv_drift** out);
DINV_API dinv_status dinv_drift_constant(double c, dinv_drift** out);
DINV_API dinv_status dinv_drift_power(double c, double alpha, dinv_drift** out);
DINV_API dinv_status dinv_drift_exp_power(double c, double alpha, double gamma, dinv_drift** out);
DINV_API dinv_status dinv_drift_explosion(double t0, dinv_drift** out);
DINV_API dinv_status dinv_drift_tabulated(const double* t, const double* rho, size_t n,
                                          int linear, dinv_drift** out);
DINV_API dinv_status dinv_drift_load_csv(const char* path, int linear, dinv_drift** out);
/* fn must be safe to call from several threads at once. */
DINV_API dinv_status dinv_drift_custom(dinv_drift_fn fn, void* user, dinv_drift** out);
DINV_API void dinv_drift_free(dinv_drift* drift);

DINV_API dinv_status dinv_drift_eval(const dinv_drift* drift, double t, double* out);
/* Copies a NUL-terminated description; *needed receives the full size. */
DINV_API dinv_status dinv_drift_describe(const dinv_drift* drift, char* buf, size_t cap,
                                         size_t* needed);

typedef struct dinv_condition_a {
  int satisfied;
  double t_i, t_j;
  double value_i, value_j;
} dinv_condition_a;

/* grid == NULL uses the default probe grid, tol <= 0 the default tolerance. */
DINV_API dinv_status dinv_drift_check_condition_a(const dinv_drift* drift, const double* grid,
                                                  size_t n, double tol, dinv_condition_a* out);

/* Laws */

DINV_API dinv_status dinv_law_create(const dinv_drift* drift, double x, dinv_law** out);
DINV_API void dinv_law_free(dinv_law* law);

DINV_API dinv_status dinv_law_cdf(const dinv_law* law, double t, double* out);
DINV_API dinv_status dinv_law_quantile(const dinv_law* law, double u, double* out);
DINV_API dinv_status dinv_law_defect_mass(const dinv_law* law, double* out);
/* The sampler map z -> Y for a standard normal z. */
DINV_API dinv_status dinv_law_invert(const dinv_law* law, double z, double* out);
DINV_API const char* dinv_law_closed_form(const dinv_law* law);
DINV_API dinv_status dinv_law_set_root_tolerance(dinv_law* law, double tol);

/* n draws into out; draw i depends only on (seed, stream, i), so the result
 * does not depend on the thread count. */
DINV_API dinv_status dinv_law_sample(const dinv_law* law, uint64_t seed, uint64_t stream,
                                     size_t n, unsigned threads, double* out);

typedef struct dinv_law_check {
  double ks;
  double critical;
  size_t finite;
  double defect_fraction;
  double defect_expected;
  double defect_standard_error;
  int ks_pass;
  int defect_within;
  int pass;
} dinv_law_check;

/* One-sample KS of the finite samples against the law, plus the defect band. */
DINV_API dinv_status dinv_law_check_samples(const dinv_law* law, const double* samples, size_t n,
                                            double alpha, dinv_law_check* out);

/* Scaling limits */

/* phi(lambda) = coef * lambda^power * exp(exp_rate / lambda) */
typedef struct dinv_scaling_form {
  double coef;
  double power;
  double exp_rate;
} dinv_scaling_form;

typedef enum dinv_scaling_case {
  DINV_CASE_ZERO_DRIFT = 0,
  DINV_CASE_EXPLOSION = 1,
  DINV_CASE_POWER_DRIFT = 2,
  DINV_CASE_DEGENERATE = 3
} dinv_scaling_case;

typedef struct dinv_report_summary {
  dinv_scaling_case kind;
  double p;
  double t0;
  double c;
  double alpha;
} dinv_report_summary;

DINV_API dinv_status dinv_family_create(const dinv_drift* drift, dinv_scaling_form phi1,
                                        dinv_scaling_form phi2, dinv_family** out);
/* phi1, phi2 tabulated on a decreasing lambda grid, which becomes the
 * family's grid. */
DINV_API dinv_status dinv_family_create_tabulated(const dinv_drift* drift, const double* lambdas,
                                                  const double* phi1, const double* phi2,
                                                  size_t n, dinv_family** out);
DINV_API dinv_status dinv_family_set_t_grid(dinv_family* family, const double* t, size_t n);
DINV_API dinv_status dinv_family_set_lambda_grid(dinv_family* family, const double* lambdas,
                                                 size_t n);
DINV_API void dinv_family_free(dinv_family* family);

DINV_API dinv_status dinv_classify(const dinv_family* family, dinv_report** out);
DINV_API void dinv_report_free(dinv_report* report);
DINV_API dinv_status dinv_report_get(const dinv_report* report, dinv_report_summary* out);
DINV_API dinv_status dinv_report_json(const dinv_report* report, char* buf, size_t cap,
                                      size_t* needed);
DINV_API dinv_status dinv_report_limit_law(const dinv_report* report, double x, dinv_law** out);

/* Geometric Brownian motion */

DINV_API dinv_status dinv_gbm_constant(double s0, double sigma, double mu, dinv_gbm** out);
/* Coefficients tabulated at knots (linear in between, constant beyond);
 * a single knot gives a constant coefficient. */
DINV_API dinv_status dinv_gbm_create(double s0, const double* sigma_t, const double* sigma_v,
                                     size_t n_sigma, const double* mu_t, const double* mu_v,
                                     size_t n_mu, dinv_gbm** out);
DINV_API void dinv_gbm_free(dinv_gbm* gbm);

DINV_API dinv_status dinv_black_scholes_call(double s0, double sigma, double strike, double t,
                                             double* out);
DINV_API dinv_status dinv_gbm_survival(const dinv_gbm* gbm, double x, double t, double* out);
DINV_API dinv_status dinv_gbm_dinverse(const dinv_gbm* gbm, double s, dinv_law** out);

typedef struct dinv_price_point {
  double t;
  double price;
  double std_error;
  int monte_carlo;
} dinv_price_point;

typedef struct dinv_monotonicity {
  int increasing;
  size_t i, j; /* counterexample indices when !increasing */
} dinv_monotonicity;

/* out must hold n points. paths == 0 uses the default path count. */
DINV_API dinv_status dinv_gbm_call_curve(const dinv_gbm* gbm, double strike, const double* t,
                                         size_t n, uint64_t seed, size_t paths,
                                         dinv_price_point* out, dinv_monotonicity* verdict);
/* E[max(S_t - K, 0)] through the increasing-expectation decomposition. */
DINV_API dinv_status dinv_gbm_call_by_survival(const dinv_gbm* gbm, double strike, double t,
                                               double* out);

#ifdef __cplusplus
}
#endif

#endif
