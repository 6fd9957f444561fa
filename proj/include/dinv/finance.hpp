#pragma once

// Geometric Brownian motion with constant or functional coefficients,
//
//   S_t = s0 exp( int_0^t sigma dB + int_0^t (mu - sigma^2/2) du ),
//
// undiscounted call prices C(t) = E[max(S_t - K, 0)], the GBM d-inverse and
// the time change that turns S into s0 exp(beta_t + rho(t)).

#include "dinv/dinverse.hpp"
#include "dinv/drift.hpp"
#include "dinv/random.hpp"

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dinv {

/// A coefficient map [0, inf) -> R. Constant coefficients are remembered so
/// closed forms can be used.
class Coefficient {
public:
  static Coefficient constant(double value);
  /// Linear interpolation between knots, constant beyond the ends.
  static Coefficient tabulated(std::vector<std::pair<double, double>> knots);
  static Coefficient function(std::function<double(double)> f);

  double operator()(double t) const { return fn_(t); }
  std::optional<double> constant_value() const noexcept { return constant_; }

private:
  Coefficient() = default;
  std::function<double(double)> fn_;
  std::optional<double> constant_;
};

class GBMSpec {
public:
  GBMSpec(double s0, Coefficient sigma, Coefficient mu);
  static GBMSpec constant(double s0, double sigma, double mu);

  double s0() const noexcept { return s0_; }
  const Coefficient& sigma() const noexcept { return sigma_; }
  const Coefficient& mu() const noexcept { return mu_; }
  double mu_tilde(double t) const;
  bool constant_coefficients() const noexcept;
  /// Constant coefficients with mu = 0, i.e. mu_tilde = -sigma^2/2.
  bool martingale() const noexcept;

  /// a(t) = int_0^t sigma^2 and b(t) = int_0^t mu_tilde (exact for constants).
  double variance(double t) const;
  double drift_integral(double t) const;

private:
  double s0_;
  Coefficient sigma_;
  Coefficient mu_;
};

/// s0 N(-log(K/s0)/(sigma sqrt t) + sigma sqrt(t)/2)
///  - K N(-log(K/s0)/(sigma sqrt t) - sigma sqrt(t)/2).
double black_scholes_call(double s0, double sigma, double strike, double t);

/// P(S_t >= x) = N((b(t) - log(x/s0)) / sqrt(a(t))).
double gbm_terminal_survival(const GBMSpec& spec, double x, double t);

/// Law of T_s, the d-inverse of S at price level s >= s0: the constant-drift
/// law with slope mu_tilde/sigma transformed by f(x) = s0 exp(sigma x).
/// NotDIncreasingError when mu_tilde < 0; DomainError for s < s0 or
/// non-constant coefficients.
TransformedLaw gbm_dinverse(const GBMSpec& spec, double s);

struct TimeChangeReduction {
  std::function<double(double)> a;          // int_0^t sigma^2
  std::function<double(double)> b;          // int_0^t mu_tilde
  std::function<double(double)> a_inverse;  // left-continuous inverse of a
  DriftFunction rho;                        // b o a^{-1}, tagged Custom
  bool mu_tilde_nonnegative = true;         // false: rho may violate (A)
};

inline constexpr double kDefaultHorizon = 100.0;

/// Quadrature for a and b, a^{-1} by left_inverse on [0, horizon] with the
/// horizon doubled on demand. DegenerateTimeChangeError when sigma vanishes
/// on the probe grid. With require_nonnegative, a negative mu_tilde on the
/// probe grid raises NotDIncreasingError instead of setting the flag.
TimeChangeReduction reduce_functional_gbm(const GBMSpec& spec, bool require_nonnegative = false,
                                          double horizon = kDefaultHorizon);

/// An increasing phi given by knots (x_i, phi_i): linear between knots, a jump
/// where two consecutive knots share x, zero below the first knot and slope
/// `tail_slope` after the last.
struct PhiKnots {
  std::vector<std::pair<double, double>> knots;
  double tail_slope = 0.0;

  static PhiKnots indicator(double x) { return {{{x, 1.0}}, 0.0}; }
  static PhiKnots call(double strike) { return {{{strike, 0.0}}, 1.0}; }
};

/// phi(x0) P(S >= x0) + int_{x0}^inf P(S >= x) dphi(x), x0 the first knot.
/// DomainError for decreasing knots or a negative tail slope.
double increasing_expectation(const std::function<double(double)>& survival, const PhiKnots& phi);

struct PricePoint {
  double t = 0.0;
  double price = 0.0;
  double std_error = 0.0;
  bool monte_carlo = false;
};

inline constexpr std::size_t kDefaultPaths = 200000;

/// Closed form for the martingale case, Monte Carlo (common random numbers
/// from `seed`) otherwise.
PricePoint call_price(const GBMSpec& spec, double strike, double t,
                      std::uint64_t seed = SeededStream::kDefaultSeed,
                      std::size_t paths = kDefaultPaths);

struct MonotonicityVerdict {
  bool increasing = true;
  std::vector<PricePoint> curve;
  // Counterexample indices into curve when !increasing.
  std::size_t i = 0;
  std::size_t j = 0;
};

/// C(t) on the grid, then C(t_i) <= C(t_j) + tol for i < j with tol = 1e-9
/// (closed form) or 3 combined standard errors (simulated).
MonotonicityVerdict call_price_monotonicity(const GBMSpec& spec, double strike,
                                            std::span<const double> t_grid,
                                            std::uint64_t seed = SeededStream::kDefaultSeed,
                                            std::size_t paths = kDefaultPaths,
                                            double closed_form_tol = 1e-9);

}  // namespace dinv
