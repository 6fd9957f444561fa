#include "dinv/montecarlo.hpp"

#include "dinv/errors.hpp"
#include "dinv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dinv {

EmpiricalLaw::EmpiricalLaw(std::span<const double> samples) {
  finite_.reserve(samples.size());
  for (double v : samples) {
    if (std::isnan(v) || v == -kInf) throw EvaluationError("EmpiricalLaw: NaN or -inf sample");
    if (v == kInf)
      ++infinite_;
    else
      finite_.push_back(v);
  }
  std::sort(finite_.begin(), finite_.end());
}

double EmpiricalLaw::defect_fraction() const noexcept {
  if (size() == 0) return 0.0;
  return static_cast<double>(infinite_) / static_cast<double>(size());
}

double sample_drifted_terminal(const DriftFunction& drift, double t, SeededStream& rng) {
  if (!(t > 0.0)) throw DomainError("sample_drifted_terminal: t must be > 0");
  return std::sqrt(t) * rng.normal() + drift(t);
}

double ks_one_sample(const EmpiricalLaw& emp, const std::function<double(double)>& cdf,
                     double defect_mass) {
  const auto xs = emp.finite();
  if (xs.empty()) throw DomainError("ks_one_sample: no finite samples");
  if (!(defect_mass >= 0.0 && defect_mass < 1.0))
    throw DomainError("ks_one_sample: defect mass must lie in [0,1)");
  const double finite_mass = 1.0 - defect_mass;
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    // Ties: the empirical CDF jumps once over the whole run.
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    // Left and right limits of F at the sample, so atoms are compared
    // against the jump they produce rather than against one side of it.
    const double x = xs[i];
    const double f_right = std::clamp(cdf(x) / finite_mass, 0.0, 1.0);
    const double f_left = std::clamp(cdf(std::nextafter(x, -kInf)) / finite_mass, 0.0, 1.0);
    d = std::max(d, std::abs(f_left - static_cast<double>(i) / m));
    d = std::max(d, std::abs(static_cast<double>(j) / m - f_right));
    i = j;
  }
  return d;
}

double ks_two_sample(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  const auto xa = a.finite();
  const auto xb = b.finite();
  if (xa.empty() || xb.empty()) {
    if (xa.empty() && xb.empty()) return 0.0;
    return 1.0;
  }
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double v = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == v) ++i;
    while (j < xb.size() && xb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_one_sample(std::size_t n, double alpha) {
  if (n == 0) throw DomainError("ks_critical_one_sample: n must be positive");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0) throw DomainError("ks_critical_two_sample: sizes must be positive");
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) * std::sqrt((dn + dm) / (dn * dm));
}

DefectCheck defect_check(const EmpiricalLaw& emp, double defect_mass, double k) {
  DefectCheck res;
  res.fraction = emp.defect_fraction();
  res.expected = defect_mass;
  const double n = static_cast<double>(emp.size());
  res.standard_error = n > 0 ? std::sqrt(defect_mass * (1.0 - defect_mass) / n) : 0.0;
  res.within = std::abs(res.fraction - defect_mass) <= k * res.standard_error + 1e-15;
  return res;
}

CrossingCheck crossing_check(const DriftFunction& drift, double x, double t, std::size_t n,
                             SeededStream& rng) {
  if (!(t > 0.0)) throw DomainError("crossing_check: t must be > 0");
  if (n < 10000) throw DomainError("crossing_check: needs n >= 10^4");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (sample_drifted_terminal(drift, t, rng) >= x) ++hits;
  CrossingCheck res;
  res.empirical = static_cast<double>(hits) / static_cast<double>(n);
  res.analytic = normal_cdf(eta(drift, x)(t));
  res.standard_error = std::sqrt(res.analytic * (1.0 - res.analytic) / static_cast<double>(n));
  res.within = std::abs(res.empirical - res.analytic) <= 4.0 * res.standard_error + 1e-15;
  return res;
}

std::function<double(double)> half_line_cdf(std::function<double(double)> cdf) {
  return [cdf = std::move(cdf)](double t) {
    if (t < 0.0) return 0.0;
    return cdf(t > 0.0 ? t : std::numeric_limits<double>::denorm_min());
  };
}

LawCheck check_law(std::span<const double> samples, const std::function<double(double)>& cdf,
                   double defect_mass, double alpha) {
  const EmpiricalLaw emp(samples);
  LawCheck res;
  res.finite = emp.finite_count();
  res.defect = defect_check(emp, defect_mass);
  if (res.finite > 0 && defect_mass < 1.0) {
    res.ks = ks_one_sample(emp, half_line_cdf(cdf), defect_mass);
    res.critical = ks_critical_one_sample(res.finite, alpha);
    res.ks_pass = res.ks < res.critical;
  }
  res.pass = res.ks_pass && res.defect.within;
  return res;
}

}  // namespace dinv
