#include "dinv/dinverse.hpp"

#include "dinv/errors.hpp"
#include "dinv/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace dinv {

namespace {

ClosedForm closed_form_for(const DriftFunction& d) {
  switch (d.kind()) {
    case DriftKind::Zero: return ClosedForm::ZeroDrift;
    case DriftKind::Constant:
      return d.c() > 0.0 ? ClosedForm::ConstantDrift : ClosedForm::ZeroDrift;
    case DriftKind::Power:
      if (d.c() == 0.0) return ClosedForm::ZeroDrift;
      return ClosedForm::PowerDrift;
    case DriftKind::Explosion: return ClosedForm::Explosion;
    default: return ClosedForm::None;
  }
}

void require_level(double x) {
  if (!(x >= 0.0) || std::isinf(x)) throw DomainError("level x must be finite and >= 0");
}

// eta^{-1}(z) for rho = 0: eta(t) = -x/sqrt(t) climbs from -inf (0 if x = 0)
// towards 0 without reaching it.
double zero_drift_inverse(double x, double z) {
  if (z < 0.0) return (x / z) * (x / z);
  if (z == 0.0 && x == 0.0) return 0.0;
  return kInf;
}

// Positive root u = sqrt(t) of c u^2 - z u - x = 0, cancellation-free.
double quadratic_root(double c, double x, double z) {
  const double disc = std::sqrt(z * z + 4.0 * c * x);
  if (z >= 0.0) return (z + disc) / (2.0 * c);
  if (x == 0.0) return 0.0;
  return 2.0 * x / (disc - z);
}

// eta(t) = c t^(alpha-1/2) - x/sqrt(t) = z, solved in u = sqrt(t):
// F(u) = c u^(2 alpha) - z u - x = 0 with F convex for alpha >= 1/2.
double power_drift_inverse(double c, double alpha, double x, double z) {
  if (alpha == 1.0) {
    const double u = quadratic_root(c, x, z);
    return u * u;
  }
  if (alpha == 0.5) {
    // eta(t) = c - x/sqrt(t), increasing to c.
    if (x == 0.0) return z <= c ? 0.0 : kInf;
    if (z >= c) return kInf;
    const double u = x / (c - z);
    return u * u;
  }
  const double k = 2.0 * alpha;
  if (x == 0.0) {
    if (z <= 0.0) return 0.0;
    const double u = std::pow(z / c, 1.0 / (k - 1.0));
    return u * u;
  }
  auto F = [&](double u) { return c * std::pow(u, k) - z * u - x; };
  auto dF = [&](double u) { return c * k * std::pow(u, k - 1.0) - z; };
  // Bracket [lo, hi] with F(lo) < 0 <= F(hi).
  double lo = 0.0;
  double hi = 1.0;
  while (F(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return kInf;
  }
  while (F(lo) >= 0.0 && lo > 0.0) lo *= 0.5;
  // Newton from the right converges monotonically on a convex increasing
  // branch; bisection guards the steps that leave the bracket.
  double u = hi;
  for (int it = 0; it < 200; ++it) {
    const double fu = F(u);
    if (fu == 0.0) break;
    if (fu > 0.0)
      hi = u;
    else
      lo = u;
    const double d = dF(u);
    double next = d > 0.0 ? u - fu / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 4e-16 * u) {
      u = next;
      break;
    }
    u = next;
  }
  return u * u;
}

}  // namespace

const char* to_string(ClosedForm form) noexcept {
  switch (form) {
    case ClosedForm::None: return "Generic";
    case ClosedForm::ZeroDrift: return "ZeroDrift";
    case ClosedForm::ConstantDrift: return "ConstantDrift";
    case ClosedForm::PowerDrift: return "PowerDrift";
    case ClosedForm::Explosion: return "Explosion";
  }
  return "unknown";
}

DInverseDistribution::DInverseDistribution(DriftFunction drift, double x)
    : drift_(std::move(drift)), x_(x), form_(closed_form_for(drift_)) {
  require_level(x);
  const ConditionA check = verify_condition_a(drift_);
  if (!check) {
    std::ostringstream os;
    os.precision(17);
    os << "drift " << drift_.describe()
       << " violates condition (A): rho(t)/sqrt(t) drops from " << check.value_i
       << " at t = " << check.t_i << " to " << check.value_j << " at t = " << check.t_j;
    throw NotDIncreasingError(os.str());
  }
}

DInverseDistribution::DInverseDistribution(Unchecked, DriftFunction drift, double x,
                                           ClosedForm form)
    : drift_(std::move(drift)), x_(x), form_(form) {
  require_level(x);
}

DInverseDistribution DInverseDistribution::zero_drift(double x) {
  return {Unchecked{}, DriftFunction::zero(), x, ClosedForm::ZeroDrift};
}

DInverseDistribution DInverseDistribution::constant_drift(double c, double x) {
  if (c == 0.0) return zero_drift(x);
  return {Unchecked{}, DriftFunction::constant(c), x, ClosedForm::ConstantDrift};
}

DInverseDistribution DInverseDistribution::power_drift(double c, double alpha, double x) {
  if (!(alpha >= 0.5))
    throw NotDIncreasingError("power drift needs alpha >= 1/2 for a d-inverse");
  if (c == 0.0) return zero_drift(x);
  return {Unchecked{}, DriftFunction::power(c, alpha), x, ClosedForm::PowerDrift};
}

DInverseDistribution DInverseDistribution::explosion(double t0, double x) {
  return {Unchecked{}, DriftFunction::explosion(t0), x, ClosedForm::Explosion};
}

DInverseDistribution DInverseDistribution::at_level(double x) const {
  DInverseDistribution d{Unchecked{}, drift_, x, form_};
  d.root_tol_ = root_tol_;
  return d;
}

void DInverseDistribution::set_root_tolerance(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("root tolerance must lie in (0,1)");
  root_tol_ = tol;
}

double DInverseDistribution::cdf(double t) const {
  if (!(t > 0.0)) throw DomainError("cdf: t must be > 0");
  const double st = std::sqrt(t);
  switch (form_) {
    case ClosedForm::ZeroDrift: return normal_cdf(-x_ / st);
    case ClosedForm::ConstantDrift: return normal_cdf(drift_.c() * st - x_ / st);
    case ClosedForm::PowerDrift:
      return normal_cdf(drift_.c() * std::pow(t, drift_.alpha() - 0.5) - x_ / st);
    case ClosedForm::Explosion: return t < drift_.t0() ? normal_cdf(-x_ / st) : 1.0;
    case ClosedForm::None: break;
  }
  return cdf_generic(t);
}

double DInverseDistribution::cdf_generic(double t) const {
  if (!(t > 0.0)) throw DomainError("cdf: t must be > 0");
  const double e = eta()(t);
  if (std::isnan(e)) {
    std::ostringstream os;
    os.precision(17);
    os << "cdf: eta is NaN at t = " << t;
    throw EvaluationError(os.str());
  }
  return normal_cdf(e);
}

double DInverseDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in [0,1]");
  // cdf(t) >= u  <=>  eta(t) >= N^{-1}(u), so closed forms reuse the inverse.
  if (form_ != ClosedForm::None) return invert_closed(normal_quantile(u));
  const MonotoneFn f([this](double t) { return cdf(t); }, 0.0, kInf, false, false);
  return left_inverse(f, u, root_tol_);
}

double DInverseDistribution::defect_mass() const {
  switch (form_) {
    case ClosedForm::ZeroDrift: return 0.5;
    case ClosedForm::ConstantDrift: return 0.0;
    case ClosedForm::PowerDrift:
      // eta tends to c when alpha = 1/2, to +inf otherwise.
      return drift_.alpha() == 0.5 ? 1.0 - normal_cdf(drift_.c()) : 0.0;
    case ClosedForm::Explosion: return 0.0;
    case ClosedForm::None: break;
  }
  // Richardson step assuming the typical t^{-1/2} approach of eta.
  const double far = 1.0 - cdf(1e12);
  const double near = 1.0 - cdf(1e10);
  const double extrapolated = (10.0 * far - near) / 9.0;
  return std::clamp(extrapolated, 0.0, 1.0);
}

double DInverseDistribution::invert(double z) const {
  if (form_ != ClosedForm::None) return invert_closed(z);
  return invert_generic(z);
}

double DInverseDistribution::invert_generic(double z) const {
  return left_inverse(eta().as_monotone(), z, root_tol_);
}

double DInverseDistribution::invert_closed(double z) const {
  if (std::isnan(z)) throw DomainError("invert: NaN draw");
  switch (form_) {
    case ClosedForm::ZeroDrift: return zero_drift_inverse(x_, z);
    case ClosedForm::ConstantDrift: {
      if (z == kInf) return kInf;
      if (z == -kInf) return 0.0;
      const double u = quadratic_root(drift_.c(), x_, z);
      return u * u;
    }
    case ClosedForm::PowerDrift:
      if (z == kInf) return kInf;
      if (z == -kInf) return 0.0;
      return power_drift_inverse(drift_.c(), drift_.alpha(), x_, z);
    case ClosedForm::Explosion: return std::min(zero_drift_inverse(x_, z), drift_.t0());
    case ClosedForm::None: break;
  }
  throw DomainError("invert_closed: law has no closed form");
}

std::vector<double> sample_parallel(const std::function<double(double)>& invert,
                                    const SeededStream& stream, std::size_t n,
                                    unsigned threads) {
  std::vector<double> out(n);
  threads = std::max(1u, threads);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = invert(stream.normal_at(i));
  };
  if (threads == 1 || n < 2) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::size_t b = std::min(n, k * chunk);
    const std::size_t e = std::min(n, b + chunk);
    pool.emplace_back([&, b, e, k] {
      try {
        work(b, e);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> sample_parallel(const DInverseDistribution& dist,
                                    const SeededStream& stream, std::size_t n,
                                    unsigned threads) {
  return sample_parallel([&dist](double z) { return dist.invert(z); }, stream, n, threads);
}

TransformedLaw::TransformedLaw(DInverseDistribution base_at_level, MonotoneFn g, double level,
                               double root_tol)
    : base_(std::move(base_at_level)), g_(std::move(g)), y_(level), root_tol_(root_tol) {}

double TransformedLaw::cdf(double t) const {
  const double gt = g_(t);
  if (!(gt > 0.0)) throw DomainError("transformed cdf: g(t) must be > 0");
  return base_.cdf(gt);
}

double TransformedLaw::quantile(double u) const {
  const double q = base_.quantile(u);
  if (q == kInf) return kInf;
  return left_inverse(g_, q, root_tol_);
}

double TransformedLaw::invert(double z) const {
  const double v = base_.invert(z);
  if (v == kInf) return kInf;
  return left_inverse(g_, v, root_tol_);
}

TransformedFamily::TransformedFamily(DInverseDistribution base, MonotoneFn f, MonotoneFn g)
    : base_(std::move(base)), f_(std::move(f)), g_(std::move(g)) {}

TransformedLaw TransformedFamily::at(double y) const {
  const double x0 = f_.lo();
  if (!std::isfinite(x0) || !f_.lo_closed())
    throw DomainError("transform: f must be defined on a closed half line [x0, inf)");
  const double floor = f_(x0);
  if (!(y >= floor)) {
    std::ostringstream os;
    os.precision(17);
    os << "transform: level " << y << " is below f(x0) = " << floor;
    throw DomainError(os.str());
  }
  const double x = left_inverse(f_, y, base_.root_tolerance());
  if (!(x >= 0.0) || std::isinf(x))
    throw DomainError("transform: f^{-1}(y) is not a finite level >= 0");
  return TransformedLaw(base_.at_level(x), g_, y, base_.root_tolerance());
}

TransformedFamily TransformedFamily::then(const MonotoneFn& f2, const MonotoneFn& g2) const {
  return TransformedFamily(base_, MonotoneFn::compose(f2, f_), MonotoneFn::compose(g_, g2));
}

TransformedLaw transform(const DInverseDistribution& dist, const MonotoneFn& f,
                         const MonotoneFn& g, double y) {
  return TransformedFamily(dist, f, g).at(y);
}

double duality_check(double c, double x, std::size_t n, SeededStream& rng) {
  if (!(c > 0.0 && x > 0.0)) throw DomainError("duality_check: c and x must be > 0");
  if (n < 1000) throw DomainError("duality_check: needs n >= 1000");
  const auto direct = DInverseDistribution::constant_drift(c, x);
  const auto swapped = DInverseDistribution::constant_drift(x, c);
  std::vector<double> a(n), b(n);
  for (auto& v : a) v = direct.sample(rng);
  for (auto& v : b) {
    const double s = swapped.sample(rng);
    v = s == 0.0 ? kInf : 1.0 / s;
  }
  return ks_two_sample(EmpiricalLaw(a), EmpiricalLaw(b));
}

DIncreasingCheck check_d_increasing(const std::function<double(double, double)>& survival,
                                    std::span<const double> t_grid,
                                    std::span<const double> x_grid, double tol) {
  if (t_grid.empty() || x_grid.empty())
    throw DomainError("check_d_increasing: grids must be nonempty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw DomainError("check_d_increasing: t grid must be increasing");
  for (double x : x_grid) {
    double max_v = 0.0;
    double max_t = 0.0;
    bool have = false;
    for (double t : t_grid) {
      const double v = survival(t, x);
      if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "check_d_increasing: survival(" << t << ", " << x << ") = " << v
           << " is not a probability";
        throw DomainError(os.str());
      }
      if (have && v < max_v - tol) return {false, max_t, t, x, max_v, v};
      if (!have || v > max_v) {
        max_v = v;
        max_t = t;
        have = true;
      }
    }
  }
  return {};
}

}  // namespace dinv
