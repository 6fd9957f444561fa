#include "dinv/dinv.h"

#include "dinv/dinverse.hpp"
#include "dinv/drift.hpp"
#include "dinv/errors.hpp"
#include "dinv/finance.hpp"
#include "dinv/montecarlo.hpp"
#include "dinv/scaling.hpp"

#include <cstring>
#include <new>
#include <string>
#include <variant>
#include <vector>

using namespace dinv;

struct dinv_drift {
  DriftFunction drift;
};

struct dinv_law {
  std::variant<DInverseDistribution, TransformedLaw, LimitLaw> law;
};

struct dinv_family {
  ScalingFamily family;
};

struct dinv_report {
  ScalingLimitReport report;
};

struct dinv_gbm {
  GBMSpec spec;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_detail;

void set_error(const char* what, std::string detail = {}) {
  g_error = what;
  g_detail = std::move(detail);
}

template <class F>
dinv_status guarded(F&& body) noexcept {
  try {
    g_error.clear();
    g_detail.clear();
    body();
    return DINV_OK;
  } catch (const ClassificationError& e) {
    set_error(e.what(), e.profile());
    return DINV_ERR_CLASSIFICATION;
  } catch (const NotDIncreasingError& e) {
    set_error(e.what());
    return DINV_ERR_NOT_D_INCREASING;
  } catch (const DegenerateTimeChangeError& e) {
    set_error(e.what());
    return DINV_ERR_DEGENERATE_TIME_CHANGE;
  } catch (const InconsistencyError& e) {
    set_error(e.what());
    return DINV_ERR_INCONSISTENT;
  } catch (const EvaluationError& e) {
    set_error(e.what());
    return DINV_ERR_EVALUATION;
  } catch (const DomainError& e) {
    set_error(e.what());
    return DINV_ERR_DOMAIN;
  } catch (const IoError& e) {
    set_error(e.what());
    return DINV_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DINV_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return DINV_ERR_INTERNAL;
  }
}

template <class... P>
bool any_null(P... p) {
  return ((p == nullptr) || ...);
}

#define DINV_REQUIRE(...)                       \
  do {                                          \
    if (any_null(__VA_ARGS__)) {                \
      set_error("null argument");               \
      return DINV_ERR_NULL_ARGUMENT;            \
    }                                           \
  } while (0)

dinv_status copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf == nullptr || cap < s.size() + 1) {
    set_error("buffer too small");
    return DINV_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  return DINV_OK;
}

dinv_status make_drift(DriftFunction d, dinv_drift** out) {
  *out = new dinv_drift{std::move(d)};
  return DINV_OK;
}

ScalingFunction to_scaling(const dinv_scaling_form& f) {
  return ScalingFunction::power_law(f.coef, f.power, f.exp_rate);
}

std::vector<std::pair<double, double>> pairs(const double* t, const double* v, size_t n) {
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.emplace_back(t[i], v[i]);
  return out;
}

}  // namespace

extern "C" {

const char* dinv_version(void) { return "1.0.0"; }

const char* dinv_status_name(dinv_status status) {
  switch (status) {
    case DINV_OK: return "ok";
    case DINV_ERR_DOMAIN: return "domain";
    case DINV_ERR_EVALUATION: return "evaluation";
    case DINV_ERR_INCONSISTENT: return "inconsistent";
    case DINV_ERR_NOT_D_INCREASING: return "not_d_increasing";
    case DINV_ERR_CLASSIFICATION: return "classification";
    case DINV_ERR_DEGENERATE_TIME_CHANGE: return "degenerate_time_change";
    case DINV_ERR_IO: return "io";
    case DINV_ERR_NULL_ARGUMENT: return "null_argument";
    case DINV_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case DINV_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* dinv_last_error(void) { return g_error.c_str(); }
const char* dinv_last_error_detail(void) { return g_detail.c_str(); }
uint64_t dinv_default_seed(void) { return SeededStream::kDefaultSeed; }

dinv_status dinv_drift_zero(dinv_drift** out) {
  DINV_REQUIRE(out);
  return guarded([&] { make_drift(DriftFunction::zero(), out); });
}

dinv_status dinv_drift_constant(double c, dinv_drift** out) {
  DINV_REQUIRE(out);
  return guarded([&] { make_drift(DriftFunction::constant(c), out); });
}

dinv_status dinv_drift_power(double c, double alpha, dinv_drift** out) {
  DINV_REQUIRE(out);
  return guarded([&] { make_drift(DriftFunction::power(c, alpha), out); });
}

dinv_status dinv_drift_exp_power(double c, double alpha, double gamma, dinv_drift** out) {
  DINV_REQUIRE(out);
  return guarded([&] { make_drift(DriftFunction::exp_power(c, alpha, gamma), out); });
}

dinv_status dinv_drift_explosion(double t0, dinv_drift** out) {
  DINV_REQUIRE(out);
  return guarded([&] { make_drift(DriftFunction::explosion(t0), out); });
}

dinv_status dinv_drift_tabulated(const double* t, const double* rho, size_t n, int linear,
                                 dinv_drift** out) {
  DINV_REQUIRE(out);
  if (n > 0) DINV_REQUIRE(t, rho);
  return guarded([&] {
    std::vector<Knot> knots;
    knots.reserve(n);
    for (size_t i = 0; i < n; ++i) knots.push_back({t[i], rho[i]});
    make_drift(DriftFunction::tabulated(std::move(knots),
                                        linear ? Interpolation::Linear : Interpolation::Step),
               out);
  });
}

dinv_status dinv_drift_load_csv(const char* path, int linear, dinv_drift** out) {
  DINV_REQUIRE(path, out);
  return guarded([&] {
    make_drift(load_drift_csv(path, linear ? Interpolation::Linear : Interpolation::Step), out);
  });
}

dinv_status dinv_drift_custom(dinv_drift_fn fn, void* user, dinv_drift** out) {
  DINV_REQUIRE(out);
  if (fn == nullptr) {
    set_error("null argument");
    return DINV_ERR_NULL_ARGUMENT;
  }
  return guarded([&] {
    make_drift(DriftFunction::custom([fn, user](double t) { return fn(t, user); }), out);
  });
}

void dinv_drift_free(dinv_drift* drift) { delete drift; }

dinv_status dinv_drift_eval(const dinv_drift* drift, double t, double* out) {
  DINV_REQUIRE(drift, out);
  return guarded([&] { *out = drift->drift(t); });
}

dinv_status dinv_drift_describe(const dinv_drift* drift, char* buf, size_t cap, size_t* needed) {
  DINV_REQUIRE(drift);
  dinv_status st = DINV_OK;
  const dinv_status g = guarded([&] { st = copy_string(drift->drift.describe(), buf, cap, needed); });
  return g != DINV_OK ? g : st;
}

dinv_status dinv_drift_check_condition_a(const dinv_drift* drift, const double* grid, size_t n,
                                         double tol, dinv_condition_a* out) {
  DINV_REQUIRE(drift, out);
  return guarded([&] {
    const auto g = grid ? std::vector<double>(grid, grid + n) : default_probe_grid();
    const auto r = verify_condition_a(drift->drift, g, tol > 0.0 ? tol : kMonotoneTolerance);
    *out = {r.satisfied ? 1 : 0, r.t_i, r.t_j, r.value_i, r.value_j};
  });
}

dinv_status dinv_law_create(const dinv_drift* drift, double x, dinv_law** out) {
  DINV_REQUIRE(drift, out);
  return guarded([&] { *out = new dinv_law{DInverseDistribution(drift->drift, x)}; });
}

void dinv_law_free(dinv_law* law) { delete law; }

dinv_status dinv_law_cdf(const dinv_law* law, double t, double* out) {
  DINV_REQUIRE(law, out);
  return guarded([&] { *out = std::visit([t](const auto& l) { return l.cdf(t); }, law->law); });
}

dinv_status dinv_law_quantile(const dinv_law* law, double u, double* out) {
  DINV_REQUIRE(law, out);
  return guarded(
      [&] { *out = std::visit([u](const auto& l) { return l.quantile(u); }, law->law); });
}

dinv_status dinv_law_defect_mass(const dinv_law* law, double* out) {
  DINV_REQUIRE(law, out);
  return guarded(
      [&] { *out = std::visit([](const auto& l) { return l.defect_mass(); }, law->law); });
}

dinv_status dinv_law_invert(const dinv_law* law, double z, double* out) {
  DINV_REQUIRE(law, out);
  return guarded([&] { *out = std::visit([z](const auto& l) { return l.invert(z); }, law->law); });
}

const char* dinv_law_closed_form(const dinv_law* law) {
  if (law == nullptr) return "";
  if (const auto* d = std::get_if<DInverseDistribution>(&law->law)) return to_string(d->closed_form());
  if (std::holds_alternative<TransformedLaw>(law->law)) return "Transformed";
  const auto& l = std::get<LimitLaw>(law->law);
  return l.degenerate() ? "PointMassAtZero" : to_string(l.law().closed_form());
}

dinv_status dinv_law_set_root_tolerance(dinv_law* law, double tol) {
  DINV_REQUIRE(law);
  return guarded([&] {
    auto* d = std::get_if<DInverseDistribution>(&law->law);
    if (d == nullptr) throw DomainError("root tolerance applies to plain d-inverse laws only");
    d->set_root_tolerance(tol);
  });
}

dinv_status dinv_law_sample(const dinv_law* law, uint64_t seed, uint64_t stream, size_t n,
                            unsigned threads, double* out) {
  DINV_REQUIRE(law);
  if (n > 0) DINV_REQUIRE(out);
  return guarded([&] {
    const SeededStream rng(seed, stream);
    std::vector<double> draws;
    if (const auto* d = std::get_if<DInverseDistribution>(&law->law)) {
      draws = sample_parallel(*d, rng, n, threads);
    } else {
      const auto inv = [law](double z) {
        return std::visit([z](const auto& l) { return l.invert(z); }, law->law);
      };
      draws = sample_parallel(inv, rng, n, threads);
    }
    std::copy(draws.begin(), draws.end(), out);
  });
}

dinv_status dinv_law_check_samples(const dinv_law* law, const double* samples, size_t n,
                                   double alpha, dinv_law_check* out) {
  DINV_REQUIRE(law, out);
  if (n > 0) DINV_REQUIRE(samples);
  return guarded([&] {
    const auto cdf = [law](double t) {
      return std::visit([t](const auto& l) { return l.cdf(t); }, law->law);
    };
    const double defect = std::visit([](const auto& l) { return l.defect_mass(); }, law->law);
    const auto r = check_law(std::span<const double>(samples, n), cdf, defect, alpha);
    *out = {r.ks,
            r.critical,
            r.finite,
            r.defect.fraction,
            r.defect.expected,
            r.defect.standard_error,
            r.ks_pass ? 1 : 0,
            r.defect.within ? 1 : 0,
            r.pass ? 1 : 0};
  });
}

dinv_status dinv_family_create(const dinv_drift* drift, dinv_scaling_form phi1,
                               dinv_scaling_form phi2, dinv_family** out) {
  DINV_REQUIRE(drift, out);
  return guarded([&] {
    auto* f = new dinv_family{ScalingFamily{drift->drift, to_scaling(phi1), to_scaling(phi2)}};
    *out = f;
  });
}

dinv_status dinv_family_create_tabulated(const dinv_drift* drift, const double* lambdas,
                                         const double* phi1, const double* phi2, size_t n,
                                         dinv_family** out) {
  DINV_REQUIRE(drift, lambdas, phi1, phi2, out);
  return guarded([&] {
    std::vector<double> l(lambdas, lambdas + n);
    ScalingFamily fam{drift->drift,
                      ScalingFunction::tabulated(l, std::vector<double>(phi1, phi1 + n)),
                      ScalingFunction::tabulated(l, std::vector<double>(phi2, phi2 + n))};
    fam.lambda_grid = l;
    fam.validate();
    *out = new dinv_family{std::move(fam)};
  });
}

dinv_status dinv_family_set_t_grid(dinv_family* family, const double* t, size_t n) {
  DINV_REQUIRE(family, t);
  return guarded([&] {
    auto copy = family->family;
    copy.t_grid.assign(t, t + n);
    copy.validate();
    family->family = std::move(copy);
  });
}

dinv_status dinv_family_set_lambda_grid(dinv_family* family, const double* lambdas, size_t n) {
  DINV_REQUIRE(family, lambdas);
  return guarded([&] {
    auto copy = family->family;
    copy.lambda_grid.assign(lambdas, lambdas + n);
    copy.validate();
    family->family = std::move(copy);
  });
}

void dinv_family_free(dinv_family* family) { delete family; }

dinv_status dinv_classify(const dinv_family* family, dinv_report** out) {
  DINV_REQUIRE(family, out);
  return guarded([&] { *out = new dinv_report{classify(family->family)}; });
}

void dinv_report_free(dinv_report* report) { delete report; }

dinv_status dinv_report_get(const dinv_report* report, dinv_report_summary* out) {
  DINV_REQUIRE(report, out);
  const auto& r = report->report;
  dinv_scaling_case kind = DINV_CASE_ZERO_DRIFT;
  switch (r.kind) {
    case ScalingCase::ZeroDrift: kind = DINV_CASE_ZERO_DRIFT; break;
    case ScalingCase::Explosion: kind = DINV_CASE_EXPLOSION; break;
    case ScalingCase::PowerDrift: kind = DINV_CASE_POWER_DRIFT; break;
    case ScalingCase::Degenerate: kind = DINV_CASE_DEGENERATE; break;
  }
  *out = {kind, r.p, r.t0, r.c, r.alpha};
  return DINV_OK;
}

dinv_status dinv_report_json(const dinv_report* report, char* buf, size_t cap, size_t* needed) {
  DINV_REQUIRE(report);
  dinv_status st = DINV_OK;
  const dinv_status g = guarded([&] { st = copy_string(report->report.to_json(), buf, cap, needed); });
  return g != DINV_OK ? g : st;
}

dinv_status dinv_report_limit_law(const dinv_report* report, double x, dinv_law** out) {
  DINV_REQUIRE(report, out);
  return guarded([&] { *out = new dinv_law{limit_law(report->report, x)}; });
}

dinv_status dinv_gbm_constant(double s0, double sigma, double mu, dinv_gbm** out) {
  DINV_REQUIRE(out);
  return guarded([&] { *out = new dinv_gbm{GBMSpec::constant(s0, sigma, mu)}; });
}

dinv_status dinv_gbm_create(double s0, const double* sigma_t, const double* sigma_v,
                            size_t n_sigma, const double* mu_t, const double* mu_v, size_t n_mu,
                            dinv_gbm** out) {
  DINV_REQUIRE(sigma_t, sigma_v, mu_t, mu_v, out);
  return guarded([&] {
    *out = new dinv_gbm{GBMSpec(s0, Coefficient::tabulated(pairs(sigma_t, sigma_v, n_sigma)),
                                Coefficient::tabulated(pairs(mu_t, mu_v, n_mu)))};
  });
}

void dinv_gbm_free(dinv_gbm* gbm) { delete gbm; }

dinv_status dinv_black_scholes_call(double s0, double sigma, double strike, double t,
                                    double* out) {
  DINV_REQUIRE(out);
  return guarded([&] { *out = black_scholes_call(s0, sigma, strike, t); });
}

dinv_status dinv_gbm_survival(const dinv_gbm* gbm, double x, double t, double* out) {
  DINV_REQUIRE(gbm, out);
  return guarded([&] { *out = gbm_terminal_survival(gbm->spec, x, t); });
}

dinv_status dinv_gbm_dinverse(const dinv_gbm* gbm, double s, dinv_law** out) {
  DINV_REQUIRE(gbm, out);
  return guarded([&] { *out = new dinv_law{gbm_dinverse(gbm->spec, s)}; });
}

dinv_status dinv_gbm_call_curve(const dinv_gbm* gbm, double strike, const double* t, size_t n,
                                uint64_t seed, size_t paths, dinv_price_point* out,
                                dinv_monotonicity* verdict) {
  DINV_REQUIRE(gbm, verdict);
  if (n > 0) DINV_REQUIRE(t, out);
  return guarded([&] {
    const auto v = call_price_monotonicity(gbm->spec, strike, std::span<const double>(t, n), seed,
                                           paths == 0 ? kDefaultPaths : paths);
    for (size_t i = 0; i < v.curve.size(); ++i) {
      const auto& p = v.curve[i];
      out[i] = {p.t, p.price, p.std_error, p.monte_carlo ? 1 : 0};
    }
    *verdict = {v.increasing ? 1 : 0, v.i, v.j};
  });
}

dinv_status dinv_gbm_call_by_survival(const dinv_gbm* gbm, double strike, double t, double* out) {
  DINV_REQUIRE(gbm, out);
  return guarded([&] {
    const auto& spec = gbm->spec;
    *out = increasing_expectation(
        [&spec, t](double x) { return gbm_terminal_survival(spec, x, t); },
        PhiKnots::call(strike));
  });
}

}  // extern "C"
