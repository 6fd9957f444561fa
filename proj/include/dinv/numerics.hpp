#pragma once

// Special functions and monotone-function machinery shared by every module.
//
// Extended reals are plain doubles carrying IEEE +-infinity; nothing in the
// library encodes infinity as a large finite sentinel.

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace dinv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Library-wide tolerances. Functions take them as defaulted arguments so a
// caller (the CLI, a test) can override without any global state.
inline constexpr double kRootTolerance = 1e-12;
inline constexpr double kMonotoneTolerance = 1e-12;
inline constexpr double kQuadratureAbsTolerance = 1e-10;
inline constexpr double kQuadratureRelTolerance = 1e-8;

// Bracket expansion limits for left_inverse on unbounded domains.
inline constexpr double kBracketFactor = 4.0;
inline constexpr double kBracketMax = 1e18;
inline constexpr double kBracketMin = 1e-18;

/// Standard Gaussian CDF N(z). Total on the extended reals.
double normal_cdf(double z) noexcept;

/// Standard Gaussian density.
double normal_pdf(double z) noexcept;

/// Inverse of normal_cdf on [0,1]; quantile(0) = -inf, quantile(1) = +inf.
/// Throws DomainError outside [0,1].
double normal_quantile(double u);

/// An increasing map from an interval [lo, hi] of the extended half line into
/// the extended reals. Endpoints may be open, in which case the function is
/// never evaluated there (eta is undefined at t = 0, for instance). Infinite
/// endpoints are always treated as open.
class MonotoneFn {
public:
  using Eval = std::function<double(double)>;

  MonotoneFn(Eval eval, double lo, double hi, bool lo_closed = true,
             bool hi_closed = true);

  static MonotoneFn identity(double lo = 0.0, double hi = kInf);

  double operator()(double x) const { return eval_(x); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool lo_closed() const noexcept { return lo_closed_; }
  bool hi_closed() const noexcept { return hi_closed_; }

  // Closure check, no evaluation.
  bool contains(double x) const noexcept;

  // Composition outer(inner(x)) on inner's domain.
  static MonotoneFn compose(const MonotoneFn& outer, const MonotoneFn& inner);

  // Attach an exact inverse on the interior of the range; left_inverse then
  // skips bisection.
  MonotoneFn with_inverse(Eval inverse) const;
  const Eval& inverse() const noexcept { return inverse_; }

private:
  Eval eval_;
  Eval inverse_;
  double lo_;
  double hi_;
  bool lo_closed_;
  bool hi_closed_;
};

struct MonotoneCheck {
  bool monotone = true;
  // Witness pair on failure: x_i < x_j but f(x_i) > f(x_j) + tol.
  double x_i = 0.0;
  double x_j = 0.0;
  double f_i = 0.0;
  double f_j = 0.0;

  explicit operator bool() const noexcept { return monotone; }
};

/// Checks f(x_1) <= ... <= f(x_n) (up to tol, scaled by max(1,|f|)) on a
/// strictly increasing grid. Throws EvaluationError on NaN.
MonotoneCheck verify_monotone(const MonotoneFn& f, std::span<const double> grid,
                              double tol = kMonotoneTolerance);

/// Left-continuous inverse inf{x in domain : f(x) >= y}, with inf of the empty
/// set equal to sup of the domain and the result equal to inf of the domain
/// when every point qualifies.
///
/// Brackets by geometric expansion from 1 (factor 4, out to 1e18 / in to
/// 1e-18) and bisects until the bracket is narrower than tol relative to the
/// result (absolute below 1). Bisection is geometric while the bracket spans
/// more than a factor of 4, so small results keep full relative precision.
///
/// Throws InconsistencyError when a probe value falls outside the bracket's
/// values, which can only happen for a non-increasing f.
double left_inverse(const MonotoneFn& f, double y, double tol = kRootTolerance);

/// Adaptive Gauss-Kronrod quadrature of f over [lo, hi]; hi may be +inf.
/// Throws EvaluationError (with the location) on a non-finite sample and
/// DomainError when lo > hi.
double integrate(const std::function<double(double)>& f, double lo, double hi);

/// n logarithmically spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// n evenly spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

}  // namespace dinv
