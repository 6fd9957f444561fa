#include "dinv/finance.hpp"

#include "dinv/errors.hpp"
#include "dinv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dinv {

Coefficient Coefficient::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("coefficient must be finite");
  Coefficient c;
  c.fn_ = [value](double) { return value; };
  c.constant_ = value;
  return c;
}

Coefficient Coefficient::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw DomainError("tabulated coefficient needs at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second))
      throw DomainError("tabulated coefficient: non-finite knot");
    if (i > 0 && !(knots[i].first > knots[i - 1].first))
      throw DomainError("tabulated coefficient: times must be strictly increasing");
  }
  if (knots.size() == 1) return constant(knots.front().second);
  Coefficient c;
  c.fn_ = [k = std::move(knots)](double t) {
    if (t <= k.front().first) return k.front().second;
    if (t >= k.back().first) return k.back().second;
    const auto it = std::upper_bound(k.begin(), k.end(), t,
                                     [](double v, const auto& kn) { return v < kn.first; });
    const auto& b = *it;
    const auto& a = *std::prev(it);
    return a.second + (b.second - a.second) * (t - a.first) / (b.first - a.first);
  };
  return c;
}

Coefficient Coefficient::function(std::function<double(double)> f) {
  if (!f) throw DomainError("coefficient: empty function");
  Coefficient c;
  c.fn_ = std::move(f);
  return c;
}

GBMSpec::GBMSpec(double s0, Coefficient sigma, Coefficient mu)
    : s0_(s0), sigma_(std::move(sigma)), mu_(std::move(mu)) {
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw DomainError("GBM: s0 must be finite and > 0");
  if (auto c = sigma_.constant_value(); c && !(*c > 0.0))
    throw DomainError("GBM: sigma must be > 0");
}

GBMSpec GBMSpec::constant(double s0, double sigma, double mu) {
  return GBMSpec(s0, Coefficient::constant(sigma), Coefficient::constant(mu));
}

double GBMSpec::mu_tilde(double t) const {
  const double s = sigma_(t);
  return mu_(t) - 0.5 * s * s;
}

bool GBMSpec::constant_coefficients() const noexcept {
  return sigma_.constant_value().has_value() && mu_.constant_value().has_value();
}

bool GBMSpec::martingale() const noexcept {
  return constant_coefficients() && *mu_.constant_value() == 0.0;
}

double GBMSpec::variance(double t) const {
  if (auto s = sigma_.constant_value()) return (*s) * (*s) * t;
  return integrate([this](double u) { const double s = sigma_(u); return s * s; }, 0.0, t);
}

double GBMSpec::drift_integral(double t) const {
  if (constant_coefficients()) return mu_tilde(0.0) * t;
  return integrate([this](double u) { return mu_tilde(u); }, 0.0, t);
}

double black_scholes_call(double s0, double sigma, double strike, double t) {
  if (!(s0 > 0.0 && sigma > 0.0 && strike > 0.0 && t > 0.0))
    throw DomainError("black_scholes_call: s0, sigma, K and t must be > 0");
  const double vol = sigma * std::sqrt(t);
  const double m = -std::log(strike / s0) / vol;
  const double d1 = m + 0.5 * vol;
  const double d2 = m - 0.5 * vol;
  // Deep in the money the complementary form keeps the small tail terms.
  if (d2 > 0.0) return (s0 - strike) - s0 * normal_cdf(-d1) + strike * normal_cdf(-d2);
  return s0 * normal_cdf(d1) - strike * normal_cdf(d2);
}

double gbm_terminal_survival(const GBMSpec& spec, double x, double t) {
  if (!(x > 0.0)) throw DomainError("gbm_terminal_survival: x must be > 0");
  if (!(t > 0.0)) throw DomainError("gbm_terminal_survival: t must be > 0");
  return normal_cdf((spec.drift_integral(t) - std::log(x / spec.s0())) / std::sqrt(spec.variance(t)));
}

TransformedLaw gbm_dinverse(const GBMSpec& spec, double s) {
  if (!spec.constant_coefficients())
    throw DomainError("gbm_dinverse: needs constant coefficients");
  const double sigma = *spec.sigma().constant_value();
  const double mu_t = spec.mu_tilde(0.0);
  if (mu_t < 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "geometric Brownian motion admits a d-inverse iff mu - sigma^2/2 >= 0; here it is "
       << mu_t;
    throw NotDIncreasingError(os.str());
  }
  if (!(s >= spec.s0())) throw DomainError("gbm_dinverse: level s must be >= s0");
  const double s0 = spec.s0();
  const auto f = MonotoneFn([s0, sigma](double x) { return s0 * std::exp(sigma * x); }, 0.0, kInf)
                     .with_inverse([s0, sigma](double y) { return std::log(y / s0) / sigma; });
  return transform(DInverseDistribution::constant_drift(mu_t / sigma, 0.0), f,
                   MonotoneFn::identity(), s);
}

TimeChangeReduction reduce_functional_gbm(const GBMSpec& spec, bool require_nonnegative,
                                          double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw DomainError("reduce_functional_gbm: horizon must be finite and > 0");
  const auto probe = linear_grid(0.0, horizon, 201);
  bool nonneg = true;
  for (double t : probe) {
    if (t > 0.0 && !(spec.sigma()(t) != 0.0)) {
      std::ostringstream os;
      os << "time change a(t) is not strictly increasing: sigma vanishes at t = " << t;
      throw DegenerateTimeChangeError(os.str());
    }
    if (spec.mu_tilde(t) < 0.0) nonneg = false;
  }
  if (require_nonnegative && !nonneg)
    throw NotDIncreasingError("reduce_functional_gbm: mu - sigma^2/2 is negative on the probe grid");

  auto a = [spec](double t) {
    return integrate([&spec](double u) { const double s = spec.sigma()(u); return s * s; }, 0.0, t);
  };
  auto b = [spec](double t) {
    return integrate([&spec](double u) { return spec.mu_tilde(u); }, 0.0, t);
  };
  std::function<double(double)> a_inverse = [a, horizon](double y) {
    if (!(y > 0.0)) return 0.0;
    double h = horizon;
    while (a(h) < y) {
      h *= 2.0;
      if (h > 1e15) throw DegenerateTimeChangeError("a(t) stays below the requested level");
    }
    return left_inverse(MonotoneFn(a, 0.0, h), y);
  };
  TimeChangeReduction red{a, b, a_inverse,
                          DriftFunction::custom([b, a_inverse](double t) { return b(a_inverse(t)); }),
                          nonneg};
  return red;
}

double increasing_expectation(const std::function<double(double)>& survival, const PhiKnots& phi) {
  const auto& k = phi.knots;
  if (!(phi.tail_slope >= 0.0) || !std::isfinite(phi.tail_slope))
    throw DomainError("increasing_expectation: tail slope must be finite and >= 0");
  if (k.empty()) return 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!std::isfinite(k[i].first) || !std::isfinite(k[i].second))
      throw DomainError("increasing_expectation: non-finite knot");
    if (i > 0 && (k[i].first < k[i - 1].first || k[i].second < k[i - 1].second))
      throw DomainError("increasing_expectation: phi knots must be increasing");
  }
  auto surv = [&survival](double x) {
    const double v = survival(x);
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("increasing_expectation: survival outside [0,1]");
    return v;
  };
  double total = k.front().second * surv(k.front().first);
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double dx = k[i + 1].first - k[i].first;
    const double dphi = k[i + 1].second - k[i].second;
    if (dphi == 0.0) continue;
    if (dx == 0.0)
      total += dphi * surv(k[i].first);
    else
      total += (dphi / dx) * integrate(surv, k[i].first, k[i + 1].first);
  }
  if (phi.tail_slope > 0.0) total += phi.tail_slope * integrate(surv, k.back().first, kInf);
  return total;
}

PricePoint call_price(const GBMSpec& spec, double strike, double t, std::uint64_t seed,
                      std::size_t paths) {
  if (!(strike > 0.0 && t > 0.0)) throw DomainError("call_price: K and t must be > 0");
  PricePoint pt;
  pt.t = t;
  if (spec.martingale()) {
    pt.price = black_scholes_call(spec.s0(), *spec.sigma().constant_value(), strike, t);
    return pt;
  }
  if (paths < 2) throw DomainError("call_price: needs at least two paths");
  const double sd = std::sqrt(spec.variance(t));
  const double b = spec.drift_integral(t);
  const SeededStream stream(seed, 0);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < paths; ++i) {
    const double payoff = std::max(spec.s0() * std::exp(sd * stream.normal_at(i) + b) - strike, 0.0);
    const double d = payoff - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (payoff - mean);
  }
  pt.price = mean;
  pt.std_error = std::sqrt(m2 / static_cast<double>(paths - 1) / static_cast<double>(paths));
  pt.monte_carlo = true;
  return pt;
}

MonotonicityVerdict call_price_monotonicity(const GBMSpec& spec, double strike,
                                            std::span<const double> t_grid, std::uint64_t seed,
                                            std::size_t paths, double closed_form_tol) {
  MonotonicityVerdict v;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw DomainError("call_price_monotonicity: t grid must be increasing");
    v.curve.push_back(call_price(spec, strike, t_grid[i], seed, paths));
  }
  for (std::size_t j = 1; j < v.curve.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const auto& a = v.curve[i];
      const auto& b = v.curve[j];
      const double tol = (a.monte_carlo || b.monte_carlo)
                             ? 3.0 * std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error)
                             : closed_form_tol;
      if (a.price > b.price + tol) {
        v.increasing = false;
        v.i = i;
        v.j = j;
        return v;
      }
    }
  }
  return v;
}

}  // namespace dinv
