#include "dinv/numerics.hpp"

#include "dinv/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dinv {

namespace {

std::string fmt_point(double x, double fx) {
  std::ostringstream os;
  os.precision(17);
  os << "f(" << x << ") = " << fx;
  return os.str();
}

}  // namespace

double normal_cdf(double z) noexcept {
  if (std::isnan(z)) return z;
  // Reduce to the lower tail so erfc never subtracts two numbers near 1.
  if (z < 0.0) return 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return 1.0 - 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("normal_quantile: probability outside [0,1]");
  if (u == 0.0) return -kInf;
  if (u == 1.0) return kInf;
  if (u == 0.5) return 0.0;
  // Lower tail through erfc_inv keeps relative accuracy for tiny u.
  if (u < 0.5) return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - u));
}

MonotoneFn::MonotoneFn(Eval eval, double lo, double hi, bool lo_closed,
                       bool hi_closed)
    : eval_(std::move(eval)),
      lo_(lo),
      hi_(hi),
      lo_closed_(lo_closed && std::isfinite(lo)),
      hi_closed_(hi_closed && std::isfinite(hi)) {
  if (!eval_) throw DomainError("MonotoneFn: empty evaluator");
  if (!(lo < hi)) throw DomainError("MonotoneFn: domain requires lo < hi");
}

MonotoneFn MonotoneFn::identity(double lo, double hi) {
  return MonotoneFn([](double x) { return x; }, lo, hi).with_inverse([](double y) { return y; });
}

MonotoneFn MonotoneFn::with_inverse(Eval inverse) const {
  MonotoneFn f = *this;
  f.inverse_ = std::move(inverse);
  return f;
}

bool MonotoneFn::contains(double x) const noexcept {
  if (x < lo_ || x > hi_) return false;
  if (x == lo_ && !lo_closed_) return false;
  if (x == hi_ && !hi_closed_) return false;
  return true;
}

MonotoneFn MonotoneFn::compose(const MonotoneFn& outer, const MonotoneFn& inner) {
  MonotoneFn f([outer, inner](double x) { return outer(inner(x)); }, inner.lo_, inner.hi_,
               inner.lo_closed_, inner.hi_closed_);
  if (outer.inverse_ && inner.inverse_) {
    f.inverse_ = [outer, inner](double y) {
      return inner.inverse_(std::clamp(outer.inverse_(y), outer.lo_, outer.hi_));
    };
  }
  return f;
}

MonotoneCheck verify_monotone(const MonotoneFn& f, std::span<const double> grid,
                              double tol) {
  MonotoneCheck res;
  bool have_max = false;
  double max_x = 0.0;
  double max_v = 0.0;
  for (double x : grid) {
    if (!f.contains(x)) continue;
    const double v = f(x);
    if (std::isnan(v))
      throw EvaluationError("verify_monotone: NaN at " + fmt_point(x, v));
    if (have_max) {
      const double scale = std::isfinite(max_v) ? std::max(1.0, std::abs(max_v)) : 1.0;
      if (v < max_v - tol * scale) {
        res = {false, max_x, x, max_v, v};
        return res;
      }
    }
    if (!have_max || v > max_v) {
      max_x = x;
      max_v = v;
      have_max = true;
    }
  }
  return res;
}

double left_inverse(const MonotoneFn& f, double y, double tol) {
  if (std::isnan(y)) throw DomainError("left_inverse: NaN target");
  const double lo = f.lo();
  const double hi = f.hi();

  auto eval = [&f](double x) {
    const double v = f(x);
    if (std::isnan(v))
      throw EvaluationError("left_inverse: NaN at " + fmt_point(x, v));
    return v;
  };

  if (f.lo_closed() && f.hi_closed() && eval(lo) > eval(hi)) {
    std::ostringstream os;
    os.precision(17);
    os << "left_inverse: function is not increasing: f(" << lo << ") = " << eval(lo) << " > f("
       << hi << ") = " << eval(hi);
    throw InconsistencyError(os.str());
  }
  if (f.lo_closed() && eval(lo) >= y) return lo;
  if (f.hi_closed() && eval(hi) < y) return hi;
  if (f.inverse()) {
    const double x = f.inverse()(y);
    if (!std::isnan(x)) return std::clamp(x, lo, hi);
  }

  double start;
  if (lo < 1.0 && 1.0 < hi)
    start = 1.0;
  else if (!std::isfinite(hi))
    start = lo + std::max(1.0, std::abs(lo));
  else if (!std::isfinite(lo))
    start = hi - std::max(1.0, std::abs(hi));
  else
    start = lo + 0.5 * (hi - lo);

  // a: f(a) < y, b: f(b) >= y.
  double a, fa, b, fb;
  const double fs = eval(start);
  if (fs >= y) {
    b = start;
    fb = fs;
    if (f.lo_closed()) {
      a = lo;
      fa = eval(lo);
    } else {
      double step = (std::isfinite(lo) ? start - lo : std::max(1.0, std::abs(start)));
      for (;;) {
        if (std::isfinite(lo)) {
          step /= kBracketFactor;
          if (step < kBracketMin * std::max(1.0, std::abs(lo))) return lo;
          a = lo + step;
        } else {
          step *= kBracketFactor;
          if (step > kBracketMax) return lo;
          a = start - step;
        }
        fa = eval(a);
        if (fa < y) break;
        b = a;
        fb = fa;
      }
    }
  } else {
    a = start;
    fa = fs;
    if (f.hi_closed()) {
      b = hi;
      fb = eval(hi);
    } else {
      double step = (std::isfinite(hi) ? hi - start : std::max(1.0, std::abs(start)));
      for (;;) {
        if (std::isfinite(hi)) {
          step /= kBracketFactor;
          if (step < kBracketMin * std::max(1.0, std::abs(hi))) return hi;
          b = hi - step;
        } else {
          b = a * kBracketFactor;
          if (b <= 0.0) b = a + step;
          if (b > kBracketMax) return hi;
        }
        fb = eval(b);
        if (fb >= y) break;
        a = b;
        fa = fb;
      }
    }
  }

  while (true) {
    const double width = b - a;
    if (width <= tol * std::max(1.0, std::abs(b)) &&
        width <= tol * std::max(std::abs(a), std::abs(b)))
      break;
    double m = (a > 0.0 && b > kBracketFactor * a) ? std::sqrt(a * b) : a + 0.5 * width;
    if (!(m > a && m < b)) break;
    const double fm = eval(m);
    if (fm < fa || fm > fb) {
      std::ostringstream os;
      os.precision(17);
      os << "left_inverse: function is not increasing: f(" << a << ") = " << fa
         << ", f(" << m << ") = " << fm << ", f(" << b << ") = " << fb;
      throw InconsistencyError(os.str());
    }
    if (fm >= y) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return b;
}

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw DomainError("integrate: requires lo <= hi");
  if (lo == hi) return 0.0;
  auto checked = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrate: non-finite integrand at x = " << x;
      throw EvaluationError(os.str());
    }
    return v;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  double l1 = 0.0;
  if (!std::isfinite(hi)) return GK::integrate(checked, lo, hi, 20, 1e-12, &err, &l1);
  // Boost's recursive step compares the error on [-1, 1] against a tolerance
  // scaled to [lo, hi], so short intervals never converge. Map explicitly.
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  auto mapped = [&](double u) { return half * checked(mid + half * u); };
  return GK::integrate(mapped, -1.0, 1.0, 20, 1e-12, &err, &l1);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > lo) || n < 2)
    throw DomainError("log_grid: requires 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 2)
    throw DomainError("linear_grid: requires lo < hi and n >= 2");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

}  // namespace dinv
