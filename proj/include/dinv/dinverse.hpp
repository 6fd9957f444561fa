#pragma once

// The law of the d-inverse Y_x of B_t + rho(t):
//
//   P(Y_x <= t) = P(B_t + rho(t) >= x) = N(eta_x(t)),   Y_x ~ eta_x^{-1}(B_1),
//
// with eta_x^{-1} the left-continuous inverse. Closed forms exist for zero,
// constant, power and explosion drifts; every other drift goes through the
// generic eta inversion.

#include "dinv/drift.hpp"
#include "dinv/numerics.hpp"
#include "dinv/random.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dinv {

enum class ClosedForm { None, ZeroDrift, ConstantDrift, PowerDrift, Explosion };

const char* to_string(ClosedForm form) noexcept;

class DInverseDistribution {
public:
  /// Law of Y_x for a drift satisfying condition (A) on the default probe
  /// grid; throws NotDIncreasingError otherwise. A closed form is attached
  /// whenever the drift's tag has one.
  DInverseDistribution(DriftFunction drift, double x);

  static DInverseDistribution zero_drift(double x);
  static DInverseDistribution constant_drift(double c, double x);
  static DInverseDistribution power_drift(double c, double alpha, double x);
  static DInverseDistribution explosion(double t0, double x);

  /// Same drift, different level.
  DInverseDistribution at_level(double x) const;

  const DriftFunction& drift() const noexcept { return drift_; }
  double level() const noexcept { return x_; }
  ClosedForm closed_form() const noexcept { return form_; }
  EtaCurve eta() const { return EtaCurve(drift_, x_); }

  double root_tolerance() const noexcept { return root_tol_; }
  void set_root_tolerance(double tol);

  /// P(Y_x <= t) for t > 0; DomainError for t <= 0.
  double cdf(double t) const;
  /// N(eta_x(t)), ignoring any closed form.
  double cdf_generic(double t) const;

  /// Left-continuous inverse of the cdf over (0, inf]; +inf once u exceeds
  /// the finite mass.
  double quantile(double u) const;

  /// P(Y_x = +inf).
  double defect_mass() const;

  /// eta_x^{-1}(z): the d-inverse value attached to a standard normal draw z.
  /// Closed-form path when available, generic otherwise.
  double invert(double z) const;
  double invert_generic(double z) const;
  /// Throws DomainError when the law has no closed form.
  double invert_closed(double z) const;

  double sample(SeededStream& rng) const { return invert(rng.normal()); }

private:
  struct Unchecked {};
  DInverseDistribution(Unchecked, DriftFunction drift, double x, ClosedForm form);

  DriftFunction drift_;
  double x_;
  ClosedForm form_;
  double root_tol_ = kRootTolerance;
};

/// Draw i uses the normal at counter position i of `stream`, so the output is
/// identical for every thread count.
std::vector<double> sample_parallel(const std::function<double(double)>& invert,
                                    const SeededStream& stream, std::size_t n,
                                    unsigned threads);
std::vector<double> sample_parallel(const DInverseDistribution& dist,
                                    const SeededStream& stream, std::size_t n,
                                    unsigned threads = 1);

class TransformedFamily;

/// Law of g^{-1}(Y_{f^{-1}(y)}): the d-inverse of f(X_{g(t)}) at level y.
class TransformedLaw {
public:
  TransformedLaw(DInverseDistribution base_at_level, MonotoneFn g, double level,
                 double root_tol);

  double level() const noexcept { return y_; }
  const DInverseDistribution& base() const noexcept { return base_; }

  /// Base cdf evaluated at g(t); DomainError when g(t) <= 0.
  double cdf(double t) const;
  double quantile(double u) const;
  double defect_mass() const { return base_.defect_mass(); }
  double invert(double z) const;
  double sample(SeededStream& rng) const { return invert(rng.normal()); }

private:
  DInverseDistribution base_;
  MonotoneFn g_;
  double y_;
  double root_tol_;
};

/// The whole transformed family y >= f(x_0), where x_0 = f.lo().
class TransformedFamily {
public:
  TransformedFamily(DInverseDistribution base, MonotoneFn f, MonotoneFn g);

  TransformedLaw at(double y) const;

  /// Transforming again by (f2, g2) equals one transform by (f2 o f, g o g2).
  TransformedFamily then(const MonotoneFn& f2, const MonotoneFn& g2) const;

  const MonotoneFn& f() const noexcept { return f_; }
  const MonotoneFn& g() const noexcept { return g_; }

private:
  DInverseDistribution base_;
  MonotoneFn f_;
  MonotoneFn g_;
};

/// f continuous increasing on [x_0, inf), g continuous increasing on [0, inf),
/// y >= f(x_0). Throws DomainError below f(x_0).
TransformedLaw transform(const DInverseDistribution& dist, const MonotoneFn& f,
                         const MonotoneFn& g, double y);

/// Two-sample KS distance between n draws of Y^(c.)_x and n reciprocals of
/// draws of Y^(x.)_c.
double duality_check(double c, double x, std::size_t n, SeededStream& rng);

struct DIncreasingCheck {
  bool d_increasing = true;
  // Counterexample: t_i < t_j at level x with survival(t_i) > survival(t_j) + tol.
  double t_i = 0.0;
  double t_j = 0.0;
  double x = 0.0;
  double value_i = 0.0;
  double value_j = 0.0;

  explicit operator bool() const noexcept { return d_increasing; }
};

inline constexpr double kDIncreasingTolerance = 1e-9;

/// Checks that survival(t, x) = P(X_t >= x) is non-decreasing in t for every
/// x on the grid. DomainError when a value falls outside [0, 1].
DIncreasingCheck check_d_increasing(const std::function<double(double, double)>& survival,
                                    std::span<const double> t_grid,
                                    std::span<const double> x_grid,
                                    double tol = kDIncreasingTolerance);

}  // namespace dinv
