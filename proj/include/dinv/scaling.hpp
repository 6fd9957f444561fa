#pragma once

// Scaling limits of lambda^{-1} Y^(phi1(lambda) rho)_{phi2(lambda) x} as
// lambda -> 0+. Everything is driven by the normalised drift
//
//   h(lambda, t) = phi1(lambda) rho(lambda t) / sqrt(lambda t)
//
// whose limit g(t) is 0, 0-then-inf, c t^(alpha - 1/2) or inf, and by
// p = lim phi2(lambda) / sqrt(lambda).

#include "dinv/dinverse.hpp"
#include "dinv/drift.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dinv {

/// A positive scaling function phi on (0, inf), evaluable in log space so
/// that factors like exp(1/(2 lambda)) do not overflow.
class ScalingFunction {
public:
  /// coef * lambda^power * exp(exp_rate / lambda).
  static ScalingFunction power_law(double coef, double power, double exp_rate = 0.0);
  /// Values known only on a lambda grid; evaluation elsewhere is a DomainError.
  static ScalingFunction tabulated(std::vector<double> lambdas, std::vector<double> values);
  static ScalingFunction custom(std::function<double(double)> eval,
                                std::function<double(double)> log_eval = {});

  double operator()(double lambda) const;
  double log_value(double lambda) const;

private:
  ScalingFunction() = default;
  std::function<double(double)> log_eval_;
};

/// Default lambda grid 2^{-k}, k = 4..40.
std::vector<double> default_lambda_grid();
/// Default probe times: 24 log-spaced points in [1/16, 16].
std::vector<double> default_scaling_t_grid();

struct ScalingFamily {
  DriftFunction drift;
  ScalingFunction phi1;
  ScalingFunction phi2;
  std::vector<double> lambda_grid = default_lambda_grid();
  std::vector<double> t_grid = default_scaling_t_grid();

  /// Grid shape and positivity of phi1, phi2 on the lambda grid.
  void validate() const;

  /// log h(lambda, t).
  double log_h(double lambda, double t) const;
};

struct LimitEstimate {
  double value = 0.0;
  bool converged = false;
  std::vector<double> sequence;  // along the lambda grid
};

/// lim phi2(lambda)/sqrt(lambda), extrapolated (Aitken) from the tail of the
/// grid. Non-convergent when the last three values differ by more than 1e-3
/// relatively (absolute floor 1e-6) or the sequence diverges.
LimitEstimate estimate_p(const ScalingFamily& family);

enum class ProbeLimit { Zero, Finite, Infinite, Unresolved };

const char* to_string(ProbeLimit limit) noexcept;

struct ProfilePoint {
  double t = 0.0;
  ProbeLimit limit = ProbeLimit::Unresolved;
  double g = 0.0;       // 0, the finite limit, +inf, or NaN when unresolved
  double last_h = 0.0;  // h at the smallest lambda
};

struct LimitProfile {
  std::vector<ProfilePoint> points;
  std::size_t unresolved = 0;

  std::string to_json() const;
};

/// Decides where a sequence h_k (along decreasing lambda) is heading, looking
/// at its last five terms:
///   -> 0    h < 1e-8 and non-increasing, or a clean power-law decay;
///   -> inf  h > 1e8 and non-decreasing, or a clean power-law growth;
///   -> finite positive  relative Cauchy gap < 1e-4.
/// A clean power law is a log-log fit of h against lambda with |slope| >= 0.05
/// and R^2 >= 0.999 on a monotone tail.
ProfilePoint classify_sequence(std::span<const double> lambdas, std::span<const double> h);

/// g on the family's t grid. ClassificationError when more than 20% of the
/// probes are unresolved.
LimitProfile limit_profile(const ScalingFamily& family);

enum class ScalingCase { ZeroDrift, Explosion, PowerDrift, Degenerate };

const char* to_string(ScalingCase c) noexcept;

struct ScalingLimitReport {
  ScalingCase kind = ScalingCase::ZeroDrift;
  double p = 0.0;
  double t0 = 0.0;     // Explosion
  double c = 0.0;      // PowerDrift
  double alpha = 0.0;  // PowerDrift
  LimitProfile profile;

  // Diagnostics.
  LimitEstimate p_estimate;
  LimitEstimate c_estimate;
  double alpha_r2 = 0.0;
  double alpha_lambda = 0.0;
  double t0_bracket_lo = 0.0;
  double t0_bracket_hi = 0.0;

  std::string to_json() const;
};

/// Sorts the family into the four cases and estimates (t0 | c, alpha) and p.
/// ClassificationError (carrying the profile as JSON) when p does not
/// converge, the profile is unresolved, mixes limits inconsistently, or the
/// power fit is poor (R^2 < 0.999, alpha < 1/2, c <= 0).
ScalingLimitReport classify(const ScalingFamily& family);

/// Either a d-inverse law or the point mass at 0 (degenerate case).
class LimitLaw {
public:
  static LimitLaw point_mass_at_zero() { return LimitLaw(std::nullopt); }
  explicit LimitLaw(std::optional<DInverseDistribution> law) : law_(std::move(law)) {}

  bool degenerate() const noexcept { return !law_.has_value(); }
  const DInverseDistribution& law() const;

  double cdf(double t) const;
  double quantile(double u) const;
  double defect_mass() const;
  double invert(double z) const;

private:
  std::optional<DInverseDistribution> law_;
};

/// ZeroDrift -> Y^(0)_{px}; Explosion -> min{Y^(0)_{px}, t0};
/// PowerDrift -> Z^(c,alpha)_{px}; Degenerate -> point mass at 0.
LimitLaw limit_law(const ScalingLimitReport& report, double x);

/// max_t |P(lambda^{-1} Z^(c lambda^(1/2-alpha), alpha)_{sqrt(lambda) x} <= t)
///        - P(Z^(c,alpha)_x <= t)|.
double verify_scale_invariance_power(double c, double alpha, double lambda, double x,
                                     std::span<const double> t_grid);

/// max_t |P(lambda^{-1} min{Y^(0)_{sqrt(lambda) x}, lambda t0} <= t)
///        - P(min{Y^(0)_x, t0} <= t)|.
double verify_scale_invariance_explosion(double t0, double lambda, double x,
                                         std::span<const double> t_grid);

struct ConvergenceTrace {
  std::vector<double> lambdas;
  std::vector<double> gaps;
  bool near_discontinuity = false;
  bool converged = false;  // eventually decreasing and below 1e-3
};

/// |P(lambda^{-1} Y^(phi1 rho)_{phi2 x} <= t) - P(Z_x <= t)| along the lambda
/// grid, where Z is the classified limit. Probes within 1% of t0 are flagged
/// and reported as converged without judgement.
ConvergenceTrace verify_scaling_convergence(const ScalingFamily& family,
                                            const ScalingLimitReport& report, double x,
                                            double t);
ConvergenceTrace verify_scaling_convergence(const ScalingFamily& family, double x, double t);

}  // namespace dinv
