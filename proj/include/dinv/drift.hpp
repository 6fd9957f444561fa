#pragma once

// Drift functions rho for Brownian motion with functional drift
// B_t + rho(t), the condition-(A) check rho(t)/sqrt(t) increasing, and the
// normalised curve eta_x(t) = (rho(t) - x) / sqrt(t).

#include "dinv/numerics.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dinv {

enum class DriftKind {
  Zero,       // rho = 0
  Constant,   // rho(t) = c t
  Power,      // rho(t) = c t^alpha
  ExpPower,   // rho(t) = c t^alpha exp(-gamma / t)
  Explosion,  // rho(t) = 0 for t < t0, +inf for t >= t0
  Tabulated,  // knots with step or linear interpolation
  Custom,
};

const char* to_string(DriftKind kind) noexcept;

enum class Interpolation { Step, Linear };

struct Knot {
  double t;
  double rho;
};

/// A non-negative, right-continuous drift rho: [0, inf) -> [0, inf].
///
/// Values may be +inf (the explosion drift); NaN, negative and -inf values
/// are rejected by the checks that evaluate the drift.
///
/// Tabulated drifts: Step mode holds rho_i on [t_i, t_{i+1}), the first value
/// before t_1 and the last one after t_n. Linear mode interpolates between
/// knots and extends the two end segments linearly, clamped at 0, so a table
/// sampled from a drift satisfying (A) keeps satisfying it outside the table.
class DriftFunction {
public:
  static DriftFunction zero();
  static DriftFunction constant(double c);
  static DriftFunction power(double c, double alpha);
  static DriftFunction exp_power(double c, double alpha, double gamma);
  static DriftFunction explosion(double t0);
  static DriftFunction tabulated(std::vector<Knot> knots,
                                 Interpolation mode = Interpolation::Step);
  /// log_eval, when given, must return log(eval(t)); it lets the scaling
  /// module work with drifts whose values under- or overflow.
  static DriftFunction custom(std::function<double(double)> eval,
                              std::function<double(double)> log_eval = {});

  double operator()(double t) const;

  /// log rho(t); -inf where rho(t) = 0, +inf where rho(t) = +inf.
  double log_value(double t) const;

  DriftKind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }
  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }
  double t0() const noexcept { return t0_; }
  Interpolation interpolation() const noexcept { return mode_; }
  std::span<const Knot> knots() const noexcept;

  std::string describe() const;

private:
  DriftFunction() = default;

  DriftKind kind_ = DriftKind::Zero;
  double c_ = 0.0;
  double alpha_ = 0.0;
  double gamma_ = 0.0;
  double t0_ = 0.0;
  Interpolation mode_ = Interpolation::Step;
  std::shared_ptr<const std::vector<Knot>> knots_;
  std::function<double(double)> eval_;
  std::function<double(double)> log_eval_;
};

/// 200 log-spaced points on [1e-8, 1e8].
std::vector<double> default_probe_grid();

struct ConditionA {
  bool satisfied = true;
  // Witness on violation: t_i < t_j with rho(t_i)/sqrt(t_i) > rho(t_j)/sqrt(t_j).
  double t_i = 0.0;
  double t_j = 0.0;
  double value_i = 0.0;
  double value_j = 0.0;

  explicit operator bool() const noexcept { return satisfied; }
};

/// Condition (A): rho(t)/sqrt(t) non-decreasing on the grid, within tol
/// (scaled by max(1, |value|)). Power drifts are answered analytically:
/// satisfied iff alpha >= 1/2 or c = 0. Zero, constant and explosion drifts
/// always satisfy it.
///
/// Throws EvaluationError when the drift is NaN, negative or -inf on the grid.
ConditionA verify_condition_a(const DriftFunction& drift, std::span<const double> grid,
                              double tol = kMonotoneTolerance);
ConditionA verify_condition_a(const DriftFunction& drift);

/// t -> (rho(t) - x) / sqrt(t) on (0, inf). No monotonicity is enforced here.
class EtaCurve {
public:
  EtaCurve(DriftFunction drift, double x);

  double operator()(double t) const;
  const DriftFunction& drift() const noexcept { return drift_; }
  double level() const noexcept { return x_; }

  /// Same curve as a MonotoneFn on the open interval (0, inf).
  MonotoneFn as_monotone() const;

private:
  DriftFunction drift_;
  double x_;
};

EtaCurve eta(const DriftFunction& drift, double x);

/// Reads a two-column CSV with header `t,rho`, strictly increasing t and
/// non-negative rho. Throws IoError on any malformed input.
DriftFunction load_drift_csv(const std::filesystem::path& path,
                             Interpolation mode = Interpolation::Step);

}  // namespace dinv
