/* Exercises the shared library through the C header only. */

#include "dinv/dinv.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK(%s) failed\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

#define CHECK_OK(call)                                                \
  do {                                                                \
    dinv_status st_ = (call);                                         \
    if (st_ != DINV_OK) {                                             \
      fprintf(stderr, "%s:%d: %s -> %s (%s)\n", __FILE__, __LINE__, #call, \
              dinv_status_name(st_), dinv_last_error());              \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static double linear_drift(double t, void* user) { return *(const double*)user * t; }
static double nan_drift(double t, void* user) {
  (void)t;
  (void)user;
  return NAN;
}

static void test_drifts(void) {
  dinv_drift* d = NULL;
  dinv_condition_a ca;
  double v = 0;
  CHECK_OK(dinv_drift_power(1.0, 0.25, &d));
  CHECK_OK(dinv_drift_check_condition_a(d, NULL, 0, 0.0, &ca));
  CHECK(!ca.satisfied);
  CHECK(ca.t_i < ca.t_j);
  dinv_drift_free(d);

  CHECK_OK(dinv_drift_constant(2.0, &d));
  CHECK_OK(dinv_drift_eval(d, 3.0, &v));
  CHECK(v == 6.0);
  {
    char small[4];
    size_t needed = 0;
    CHECK(dinv_drift_describe(d, small, sizeof small, &needed) == DINV_ERR_BUFFER_TOO_SMALL);
    CHECK(needed > sizeof small);
    char* buf = malloc(needed);
    CHECK_OK(dinv_drift_describe(d, buf, needed, &needed));
    CHECK(strlen(buf) + 1 == needed);
    free(buf);
  }
  dinv_drift_free(d);

  {
    const double t[] = {0.5, 1.0, 2.0};
    const double rho[] = {1.0, 1.0, 1.0};
    CHECK_OK(dinv_drift_tabulated(t, rho, 3, 0, &d));
    CHECK_OK(dinv_drift_check_condition_a(d, NULL, 0, 0.0, &ca));
    CHECK(!ca.satisfied);
    dinv_drift_free(d);
    const double bad_t[] = {1.0, 1.0};
    CHECK(dinv_drift_tabulated(bad_t, rho, 2, 0, &d) == DINV_ERR_DOMAIN);
  }

  CHECK(dinv_drift_constant(-1.0, &d) == DINV_ERR_DOMAIN);
  CHECK(strlen(dinv_last_error()) > 0);
  CHECK(dinv_drift_zero(NULL) == DINV_ERR_NULL_ARGUMENT);
  CHECK(dinv_drift_load_csv("no/such.csv", 0, &d) == DINV_ERR_IO);
  dinv_drift_free(NULL);
}

static void test_laws(void) {
  dinv_drift* d = NULL;
  dinv_law* law = NULL;
  double v = 0;

  CHECK_OK(dinv_drift_constant(1.0, &d));
  CHECK_OK(dinv_law_create(d, 0.0, &law));
  CHECK_OK(dinv_law_cdf(law, 1.0, &v));
  CHECK(fabs(v - 0.84134474606854294859) < 1e-15);
  CHECK(strcmp(dinv_law_closed_form(law), "ConstantDrift") == 0);
  CHECK(dinv_law_cdf(law, 0.0, &v) == DINV_ERR_DOMAIN);
  CHECK(dinv_law_quantile(law, 2.0, &v) == DINV_ERR_DOMAIN);
  CHECK_OK(dinv_law_set_root_tolerance(law, 1e-10));
  dinv_law_free(law);
  dinv_drift_free(d);

  CHECK_OK(dinv_drift_zero(&d));
  CHECK_OK(dinv_law_create(d, 1.0, &law));
  CHECK_OK(dinv_law_defect_mass(law, &v));
  CHECK(v == 0.5);
  CHECK_OK(dinv_law_quantile(law, 0.6, &v));
  CHECK(isinf(v));
  {
    enum { N = 100000 };
    double* a = malloc(N * sizeof(double));
    double* b = malloc(N * sizeof(double));
    dinv_law_check chk;
    CHECK_OK(dinv_law_sample(law, 7, 0, N, 1, a));
    CHECK_OK(dinv_law_sample(law, 7, 0, N, 4, b));
    CHECK(memcmp(a, b, N * sizeof(double)) == 0);
    CHECK_OK(dinv_law_check_samples(law, a, N, 0.01, &chk));
    CHECK(chk.pass);
    CHECK(fabs(chk.defect_fraction - 0.5) < 3 * chk.defect_standard_error);
    free(a);
    free(b);
  }
  dinv_law_free(law);
  dinv_drift_free(d);

  CHECK_OK(dinv_drift_power(1.0, 0.25, &d));
  CHECK(dinv_law_create(d, 1.0, &law) == DINV_ERR_NOT_D_INCREASING);
  dinv_drift_free(d);

  {
    double slope = 1.0;
    CHECK_OK(dinv_drift_custom(linear_drift, &slope, &d));
    CHECK_OK(dinv_law_create(d, 0.0, &law));
    CHECK_OK(dinv_law_cdf(law, 1.0, &v));
    CHECK(fabs(v - 0.84134474606854294859) < 1e-15);
    CHECK(strcmp(dinv_law_closed_form(law), "Generic") == 0);
    dinv_law_free(law);
    dinv_drift_free(d);
    CHECK_OK(dinv_drift_custom(nan_drift, NULL, &d));
    CHECK(dinv_law_create(d, 0.0, &law) == DINV_ERR_EVALUATION);
    dinv_drift_free(d);
  }
}

static void test_scaling(void) {
  dinv_drift* d = NULL;
  dinv_family* fam = NULL;
  dinv_report* rep = NULL;
  dinv_report_summary s;
  dinv_law* law = NULL;
  double v = 0;
  const dinv_scaling_form phi1 = {3.0, -1.5, 0.0};
  const dinv_scaling_form phi2 = {1.0, 0.5, 0.0};

  CHECK_OK(dinv_drift_power(1.0, 2.0, &d));
  CHECK_OK(dinv_family_create(d, phi1, phi2, &fam));
  CHECK_OK(dinv_classify(fam, &rep));
  CHECK_OK(dinv_report_get(rep, &s));
  CHECK(s.kind == DINV_CASE_POWER_DRIFT);
  CHECK(fabs(s.c - 3.0) < 0.03);
  CHECK(fabs(s.alpha - 2.0) < 0.02);
  {
    size_t needed = 0;
    CHECK(dinv_report_json(rep, NULL, 0, &needed) == DINV_ERR_BUFFER_TOO_SMALL);
    char* buf = malloc(needed);
    CHECK_OK(dinv_report_json(rep, buf, needed, &needed));
    CHECK(strstr(buf, "\"case\":\"PowerDrift\"") != NULL);
    free(buf);
  }
  CHECK_OK(dinv_report_limit_law(rep, 1.0, &law));
  CHECK_OK(dinv_law_cdf(law, 1.0, &v));
  CHECK(v > 0.0 && v < 1.0);
  dinv_law_free(law);
  dinv_report_free(rep);
  dinv_family_free(fam);

  {
    /* Same family on a tabulated lambda grid. */
    enum { N = 30 };
    double l[N], p1[N], p2[N];
    for (int k = 0; k < N; ++k) {
      l[k] = ldexp(1.0, -(k + 5));
      p1[k] = 3.0 * pow(l[k], -1.5);
      p2[k] = sqrt(l[k]);
    }
    CHECK_OK(dinv_family_create_tabulated(d, l, p1, p2, N, &fam));
    CHECK_OK(dinv_classify(fam, &rep));
    CHECK_OK(dinv_report_get(rep, &s));
    CHECK(s.kind == DINV_CASE_POWER_DRIFT);
    dinv_report_free(rep);
    dinv_family_free(fam);
  }
  dinv_drift_free(d);

  {
    const dinv_scaling_form wobbly = {1.0, 0.25, 0.0};
    CHECK_OK(dinv_drift_constant(1.0, &d));
    CHECK_OK(dinv_family_create(d, phi1, wobbly, &fam));
    CHECK(dinv_classify(fam, &rep) == DINV_ERR_CLASSIFICATION);
    dinv_family_free(fam);
    dinv_drift_free(d);
  }
}

static void test_finance(void) {
  dinv_gbm* g = NULL;
  dinv_law* law = NULL;
  double v = 0;
  CHECK_OK(dinv_black_scholes_call(1, 1, 1, 1, &v));
  CHECK(fabs(v - 0.38292492254802620728) < 1e-15);
  CHECK(dinv_black_scholes_call(1, 1, 1, 0, &v) == DINV_ERR_DOMAIN);

  CHECK_OK(dinv_gbm_constant(1.0, 1.0, 0.0, &g));
  {
    const double t[] = {0.5, 1.0, 2.0};
    dinv_price_point pts[3];
    dinv_monotonicity m;
    CHECK_OK(dinv_gbm_call_curve(g, 1.0, t, 3, dinv_default_seed(), 0, pts, &m));
    CHECK(m.increasing);
    CHECK(fabs(pts[1].price - 0.38292492254802620728) < 1e-15);
    CHECK(!pts[1].monte_carlo);
  }
  CHECK_OK(dinv_gbm_call_by_survival(g, 1.0, 1.0, &v));
  CHECK(fabs(v - 0.38292492254802620728) < 1e-6);
  CHECK(dinv_gbm_dinverse(g, 2.0, &law) == DINV_ERR_NOT_D_INCREASING);
  dinv_gbm_free(g);

  CHECK_OK(dinv_gbm_constant(1.0, 1.0, 1.5, &g));
  CHECK_OK(dinv_gbm_dinverse(g, exp(1.0), &law));
  CHECK_OK(dinv_law_quantile(law, 0.5, &v));
  CHECK(fabs(v - 1.0) < 1e-9);
  CHECK(strcmp(dinv_law_closed_form(law), "Transformed") == 0);
  dinv_law_free(law);
  CHECK_OK(dinv_gbm_survival(g, exp(1.0), 1.0, &v));
  CHECK(fabs(v - 0.5) < 1e-15);
  dinv_gbm_free(g);

  {
    const double st[] = {0.0, 1.0}, sv[] = {1.0, 2.0}, mt[] = {0.0}, mv[] = {3.0};
    CHECK_OK(dinv_gbm_create(1.0, st, sv, 2, mt, mv, 1, &g));
    CHECK_OK(dinv_gbm_survival(g, 1.0, 1.0, &v));
    CHECK(v > 0.5);
    dinv_gbm_free(g);
  }
}

int main(void) {
  CHECK(strlen(dinv_version()) > 0);
  CHECK(strcmp(dinv_status_name(DINV_ERR_IO), "io") == 0);
  test_drifts();
  test_laws();
  test_scaling();
  test_finance();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
