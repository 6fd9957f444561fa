#pragma once

// Simulation oracle: terminal values of B_t + rho(t), empirical laws with an
// atom at +inf, and Kolmogorov-Smirnov statistics.

#include "dinv/drift.hpp"
#include "dinv/random.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dinv {

/// Samples on [0, inf]: finite values kept sorted, +inf values counted.
class EmpiricalLaw {
public:
  /// Throws EvaluationError on NaN or -inf.
  explicit EmpiricalLaw(std::span<const double> samples);

  std::span<const double> finite() const noexcept { return finite_; }
  std::size_t finite_count() const noexcept { return finite_.size(); }
  std::size_t infinite_count() const noexcept { return infinite_; }
  std::size_t size() const noexcept { return finite_.size() + infinite_; }
  double defect_fraction() const noexcept;

private:
  std::vector<double> finite_;
  std::size_t infinite_ = 0;
};

/// sqrt(t) z + rho(t) with z standard normal.
double sample_drifted_terminal(const DriftFunction& drift, double t, SeededStream& rng);

/// sup |F_emp - F| over the finite samples, where F is `cdf` conditioned on
/// finiteness, cdf(t) / (1 - defect_mass). Both one-sided limits of F are
/// used at each sample, so atoms are handled. The defect itself is checked
/// with defect_check. Throws DomainError when every sample is infinite.
double ks_one_sample(const EmpiricalLaw& emp, const std::function<double(double)>& cdf,
                     double defect_mass = 0.0);

/// sup distance between the two empirical CDFs of the finite samples
/// (each conditioned on finiteness). Infinite fractions are compared separately.
double ks_two_sample(const EmpiricalLaw& a, const EmpiricalLaw& b);

/// Asymptotic critical values sqrt(-ln(alpha/2)/2) * scale.
double ks_critical_one_sample(std::size_t n, double alpha = 0.01);
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha = 0.01);

struct DefectCheck {
  double fraction = 0.0;
  double expected = 0.0;
  double standard_error = 0.0;
  bool within = true;
};

/// |infinite fraction - defect_mass| <= k * sqrt(p(1-p)/n).
DefectCheck defect_check(const EmpiricalLaw& emp, double defect_mass, double k = 3.0);

struct CrossingCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  double standard_error = 0.0;
  bool within = true;  // |gap| < 4 standard errors
};

/// Empirical P(B_t + rho(t) >= x) against N(eta_x(t)). Needs n >= 10^4.
CrossingCheck crossing_check(const DriftFunction& drift, double x, double t, std::size_t n,
                             SeededStream& rng);

struct LawCheck {
  double ks = 0.0;
  double critical = 0.0;
  std::size_t finite = 0;
  DefectCheck defect;
  bool ks_pass = true;
  bool pass = true;
};

/// Extends a CDF defined on t > 0 to the real line: 0 below zero and the
/// right limit at zero.
std::function<double(double)> half_line_cdf(std::function<double(double)> cdf);

/// One-sample KS at level alpha on the finite part plus the binomial defect
/// check. With no finite samples only the defect check applies. `cdf` is a
/// law on t > 0 and is passed through half_line_cdf.
LawCheck check_law(std::span<const double> samples, const std::function<double(double)>& cdf,
                   double defect_mass, double alpha = 0.01);

}  // namespace dinv
