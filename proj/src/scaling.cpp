#include "dinv/scaling.hpp"

#include "dinv/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dinv {

namespace {

constexpr double kZeroThreshold = 1e-8;
constexpr double kInfThreshold = 1e8;
constexpr double kCauchyGap = 1e-4;
constexpr double kTrendSlope = 0.05;
constexpr double kFitR2 = 0.999;
constexpr double kUnresolvedShare = 0.2;
constexpr double kLimitRelTol = 1e-3;
constexpr double kLimitAbsTol = 1e-6;
constexpr double kSplitRelWidth = 1e-3;
constexpr double kConvergenceGap = 1e-3;
constexpr std::size_t kTail = 5;

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

bool non_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

bool non_decreasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) return false;
  return true;
}

// Aitken extrapolation of the last three terms when they look geometrically
// convergent; the last term otherwise.
double extrapolate(std::span<const double> s) {
  if (s.size() < 3) return s.back();
  const double r1 = s[s.size() - 3], r2 = s[s.size() - 2], r3 = s[s.size() - 1];
  const double d1 = r2 - r1, d2 = r3 - r2;
  if (d1 == 0.0 || d2 == 0.0) return r3;
  const double ratio = d2 / d1;
  if (!(ratio > 0.0 && ratio < 1.0)) return r3;
  return r3 - d2 * d2 / (d2 - d1);
}

LimitEstimate limit_of(std::vector<double> seq) {
  LimitEstimate est;
  est.sequence = std::move(seq);
  const auto& s = est.sequence;
  if (s.size() < 3) return est;
  for (double v : s)
    if (std::isnan(v)) return est;
  const double r1 = s[s.size() - 3], r2 = s[s.size() - 2], r3 = s[s.size() - 1];
  if (!std::isfinite(r1) || !std::isfinite(r2) || !std::isfinite(r3)) {
    est.value = r3;
    return est;
  }
  const double tol = std::max(kLimitRelTol * std::abs(r3), kLimitAbsTol);
  est.converged = std::abs(r3 - r2) <= tol && std::abs(r2 - r1) <= tol;
  est.value = est.converged ? extrapolate(s) : r3;
  return est;
}

nlohmann::json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

nlohmann::json profile_json(const LimitProfile& prof) {
  auto arr = nlohmann::json::array();
  for (const auto& p : prof.points)
    arr.push_back({{"t", p.t}, {"limit", to_string(p.limit)}, {"g", num(p.g)}, {"h_last", num(p.last_h)}});
  return arr;
}

std::vector<double> h_sequence(const ScalingFamily& fam, double t) {
  std::vector<double> h;
  h.reserve(fam.lambda_grid.size());
  for (double lam : fam.lambda_grid) h.push_back(std::exp(fam.log_h(lam, t)));
  return h;
}

}  // namespace

// --- ScalingFunction -------------------------------------------------------

ScalingFunction ScalingFunction::power_law(double coef, double power, double exp_rate) {
  if (!(coef > 0.0) || !std::isfinite(coef) || !std::isfinite(power) || !std::isfinite(exp_rate))
    throw DomainError("scaling function: coef must be > 0 and all parameters finite");
  ScalingFunction f;
  const double lc = std::log(coef);
  f.log_eval_ = [lc, power, exp_rate](double lam) {
    return lc + power * std::log(lam) + exp_rate / lam;
  };
  return f;
}

ScalingFunction ScalingFunction::tabulated(std::vector<double> lambdas, std::vector<double> values) {
  if (lambdas.size() != values.size() || lambdas.empty())
    throw DomainError("tabulated scaling function: sizes differ or empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("tabulated scaling function: values must be finite and > 0");
  ScalingFunction f;
  f.log_eval_ = [lams = std::move(lambdas), vals = std::move(values)](double lam) {
    for (std::size_t i = 0; i < lams.size(); ++i)
      if (lams[i] == lam) return std::log(vals[i]);
    std::ostringstream os;
    os.precision(17);
    os << "tabulated scaling function has no value at lambda = " << lam;
    throw DomainError(os.str());
  };
  return f;
}

ScalingFunction ScalingFunction::custom(std::function<double(double)> eval,
                                        std::function<double(double)> log_eval) {
  if (!eval && !log_eval) throw DomainError("scaling function: empty evaluator");
  ScalingFunction f;
  if (log_eval)
    f.log_eval_ = std::move(log_eval);
  else
    f.log_eval_ = [e = std::move(eval)](double lam) { return std::log(e(lam)); };
  return f;
}

double ScalingFunction::operator()(double lambda) const { return std::exp(log_eval_(lambda)); }

double ScalingFunction::log_value(double lambda) const { return log_eval_(lambda); }

// --- family ----------------------------------------------------------------

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int k = 4; k <= 40; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

std::vector<double> default_scaling_t_grid() { return log_grid(1.0 / 16.0, 16.0, 24); }

void ScalingFamily::validate() const {
  if (lambda_grid.size() < 8) throw DomainError("scaling family: lambda grid needs >= 8 points");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0)) throw DomainError("scaling family: lambda grid must be positive");
    if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1]))
      throw DomainError("scaling family: lambda grid must be decreasing");
  }
  if (t_grid.empty()) throw DomainError("scaling family: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw DomainError("scaling family: t grid must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw DomainError("scaling family: t grid must be increasing");
  }
  for (double lam : lambda_grid) {
    if (std::isnan(phi1.log_value(lam)) || std::isnan(phi2.log_value(lam)))
      throw DomainError("scaling family: phi1, phi2 must be positive on the lambda grid");
  }
}

double ScalingFamily::log_h(double lambda, double t) const {
  const double lp = phi1.log_value(lambda);
  const double lr = drift.log_value(lambda * t);
  if (lr == -kInf) return -kInf;
  if (lr == kInf) return kInf;
  return lp + lr - 0.5 * std::log(lambda * t);
}

// --- estimates -------------------------------------------------------------

LimitEstimate estimate_p(const ScalingFamily& family) {
  family.validate();
  std::vector<double> seq;
  seq.reserve(family.lambda_grid.size());
  for (double lam : family.lambda_grid)
    seq.push_back(std::exp(family.phi2.log_value(lam) - 0.5 * std::log(lam)));
  LimitEstimate est = limit_of(std::move(seq));
  if (est.converged) est.value = std::max(0.0, est.value);
  return est;
}

const char* to_string(ProbeLimit limit) noexcept {
  switch (limit) {
    case ProbeLimit::Zero: return "zero";
    case ProbeLimit::Finite: return "finite";
    case ProbeLimit::Infinite: return "inf";
    case ProbeLimit::Unresolved: return "unresolved";
  }
  return "unknown";
}

ProfilePoint classify_sequence(std::span<const double> lambdas, std::span<const double> h) {
  ProfilePoint pt;
  pt.g = std::nan("");
  if (h.empty() || h.size() != lambdas.size()) return pt;
  pt.last_h = h.back();
  const std::size_t k = std::min(kTail, h.size());
  const auto tail = h.subspan(h.size() - k);
  const auto lam_tail = lambdas.subspan(lambdas.size() - k);
  for (double v : tail)
    if (std::isnan(v)) return pt;

  const double last = tail.back();
  if (last < kZeroThreshold && non_increasing(tail)) {
    pt.limit = ProbeLimit::Zero;
    pt.g = 0.0;
    return pt;
  }
  if (last > kInfThreshold && non_decreasing(tail)) {
    pt.limit = ProbeLimit::Infinite;
    pt.g = kInf;
    return pt;
  }
  const bool positive_finite =
      std::all_of(tail.begin(), tail.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
  if (!positive_finite) return pt;

  double gap = 0.0;
  for (double v : tail) gap = std::max(gap, std::abs(v - last));
  if (gap < kCauchyGap * last) {
    pt.limit = ProbeLimit::Finite;
    pt.g = extrapolate(tail);
    return pt;
  }

  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    lx[i] = std::log(lam_tail[i]);
    ly[i] = std::log(tail[i]);
  }
  const LinearFit fit = least_squares(lx, ly);
  if (fit.r2 >= kFitR2) {
    if (fit.slope <= -kTrendSlope && non_decreasing(tail)) {
      pt.limit = ProbeLimit::Infinite;
      pt.g = kInf;
    } else if (fit.slope >= kTrendSlope && non_increasing(tail)) {
      pt.limit = ProbeLimit::Zero;
      pt.g = 0.0;
    }
  }
  return pt;
}

std::string LimitProfile::to_json() const { return profile_json(*this).dump(); }

LimitProfile limit_profile(const ScalingFamily& family) {
  family.validate();
  LimitProfile prof;
  for (double t : family.t_grid) {
    const auto h = h_sequence(family, t);
    ProfilePoint pt = classify_sequence(family.lambda_grid, h);
    pt.t = t;
    if (pt.limit == ProbeLimit::Unresolved) ++prof.unresolved;
    prof.points.push_back(pt);
  }
  if (static_cast<double>(prof.unresolved) >
      kUnresolvedShare * static_cast<double>(prof.points.size())) {
    std::ostringstream os;
    os << "limit profile: " << prof.unresolved << " of " << prof.points.size()
       << " probes unresolved";
    throw ClassificationError(os.str(), prof.to_json());
  }
  return prof;
}

const char* to_string(ScalingCase c) noexcept {
  switch (c) {
    case ScalingCase::ZeroDrift: return "ZeroDrift";
    case ScalingCase::Explosion: return "Explosion";
    case ScalingCase::PowerDrift: return "PowerDrift";
    case ScalingCase::Degenerate: return "Degenerate";
  }
  return "unknown";
}

std::string ScalingLimitReport::to_json() const {
  nlohmann::json j;
  j["case"] = to_string(kind);
  j["p"] = num(p);
  if (kind == ScalingCase::Explosion) j["t0"] = num(t0);
  if (kind == ScalingCase::PowerDrift) {
    j["c"] = num(c);
    j["alpha"] = num(alpha);
  }
  j["g_profile"] = profile_json(profile);
  nlohmann::json d;
  d["p_converged"] = p_estimate.converged;
  d["unresolved"] = profile.unresolved;
  if (kind == ScalingCase::PowerDrift) {
    d["alpha_r2"] = num(alpha_r2);
    d["alpha_lambda"] = num(alpha_lambda);
    d["c_converged"] = c_estimate.converged;
  }
  if (kind == ScalingCase::Explosion) d["t0_bracket"] = {num(t0_bracket_lo), num(t0_bracket_hi)};
  j["diagnostics"] = d;
  return j.dump();
}

ScalingLimitReport classify(const ScalingFamily& family) {
  family.validate();
  ScalingLimitReport rep;
  rep.p_estimate = estimate_p(family);
  if (!rep.p_estimate.converged)
    throw ClassificationError("phi2(lambda)/sqrt(lambda) does not converge to a finite p");
  rep.p = rep.p_estimate.value;
  rep.profile = limit_profile(family);

  auto fail = [&](const std::string& why) {
    throw ClassificationError("classification failed: " + why, rep.profile.to_json());
  };

  std::size_t zeros = 0, finite = 0, infs = 0;
  for (const auto& pt : rep.profile.points) {
    if (pt.limit == ProbeLimit::Zero) ++zeros;
    if (pt.limit == ProbeLimit::Finite) ++finite;
    if (pt.limit == ProbeLimit::Infinite) ++infs;
  }

  if (finite == 0 && infs == 0 && zeros > 0) {
    rep.kind = ScalingCase::ZeroDrift;
    return rep;
  }
  if (finite == 0 && zeros == 0 && infs > 0) {
    rep.kind = ScalingCase::Degenerate;
    return rep;
  }
  if (finite == 0 && zeros > 0 && infs > 0) {
    double t_lo = 0.0, t_hi = kInf;
    bool seen_inf = false;
    for (const auto& pt : rep.profile.points) {
      if (pt.limit == ProbeLimit::Infinite) {
        seen_inf = true;
        t_hi = std::min(t_hi, pt.t);
      } else if (pt.limit == ProbeLimit::Zero) {
        if (seen_inf) fail("zero limit above an infinite one; g is not increasing");
        t_lo = pt.t;
      }
    }
    while (t_hi - t_lo > kSplitRelWidth * t_hi) {
      const double m = 0.5 * (t_lo + t_hi);
      const auto h = h_sequence(family, m);
      const ProfilePoint pt = classify_sequence(family.lambda_grid, h);
      if (pt.limit == ProbeLimit::Zero)
        t_lo = m;
      else if (pt.limit == ProbeLimit::Infinite)
        t_hi = m;
      else
        break;
    }
    rep.kind = ScalingCase::Explosion;
    rep.t0 = 0.5 * (t_lo + t_hi);
    rep.t0_bracket_lo = t_lo;
    rep.t0_bracket_hi = t_hi;
    return rep;
  }
  if (finite > 0 && zeros == 0 && infs == 0) {
    double prev = 0.0;
    for (const auto& pt : rep.profile.points) {
      if (pt.limit != ProbeLimit::Finite) continue;
      if (pt.g < prev * (1.0 - 1e-6)) fail("finite profile is not increasing");
      prev = pt.g;
    }
    // Index of regular variation from log(rho(lambda t)/rho(lambda)) against
    // log t at the smallest lambda where every ratio is finite.
    const auto& ts = family.t_grid;
    std::vector<double> lx(ts.size()), ly(ts.size());
    bool fitted = false;
    for (auto it = family.lambda_grid.rbegin(); it != family.lambda_grid.rend(); ++it) {
      const double lam = *it;
      const double base = family.drift.log_value(lam);
      if (!std::isfinite(base)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        lx[i] = std::log(ts[i]);
        ly[i] = family.drift.log_value(lam * ts[i]) - base;
        if (!std::isfinite(ly[i])) ok = false;
      }
      if (!ok) continue;
      const LinearFit fit = least_squares(lx, ly);
      rep.alpha = fit.slope;
      rep.alpha_r2 = fit.r2;
      rep.alpha_lambda = lam;
      fitted = true;
      break;
    }
    if (!fitted) fail("rho(lambda t)/rho(lambda) is not finite at any lambda");
    if (rep.alpha_r2 < kFitR2) fail("regular-variation fit has R^2 below 0.999");
    if (rep.alpha < 0.5 - 1e-6) fail("fitted index alpha is below 1/2");
    rep.alpha = std::max(rep.alpha, 0.5);

    std::vector<double> cseq;
    for (double lam : family.lambda_grid)
      cseq.push_back(
          std::exp(family.drift.log_value(lam) + family.phi1.log_value(lam) - 0.5 * std::log(lam)));
    rep.c_estimate = limit_of(std::move(cseq));
    if (!rep.c_estimate.converged) fail("rho(lambda) phi1(lambda)/sqrt(lambda) does not converge");
    rep.c = rep.c_estimate.value;
    if (!(rep.c > 0.0) || !std::isfinite(rep.c)) fail("estimated c is not finite and positive");
    rep.kind = ScalingCase::PowerDrift;
    return rep;
  }
  fail("profile mixes zero, finite and infinite limits");
  return rep;  // unreachable
}

// --- limit laws --------------------------------------------------------------

const DInverseDistribution& LimitLaw::law() const {
  if (!law_) throw DomainError("degenerate limit law has no d-inverse distribution");
  return *law_;
}

double LimitLaw::cdf(double t) const {
  if (!law_) {
    if (!(t >= 0.0)) throw DomainError("cdf: t must be >= 0");
    return 1.0;
  }
  return law_->cdf(t);
}

double LimitLaw::quantile(double u) const {
  if (!law_) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in [0,1]");
    return 0.0;
  }
  return law_->quantile(u);
}

double LimitLaw::defect_mass() const { return law_ ? law_->defect_mass() : 0.0; }

double LimitLaw::invert(double z) const { return law_ ? law_->invert(z) : 0.0; }

LimitLaw limit_law(const ScalingLimitReport& report, double x) {
  if (!(x >= 0.0) || std::isinf(x)) throw DomainError("limit_law: level must be finite and >= 0");
  const double level = report.p * x;
  switch (report.kind) {
    case ScalingCase::ZeroDrift: return LimitLaw(DInverseDistribution::zero_drift(level));
    case ScalingCase::Explosion:
      return LimitLaw(DInverseDistribution::explosion(report.t0, level));
    case ScalingCase::PowerDrift:
      return LimitLaw(DInverseDistribution::power_drift(report.c, report.alpha, level));
    case ScalingCase::Degenerate: return LimitLaw::point_mass_at_zero();
  }
  return LimitLaw::point_mass_at_zero();
}

double verify_scale_invariance_power(double c, double alpha, double lambda, double x,
                                     std::span<const double> t_grid) {
  if (!(c > 0.0 && alpha >= 0.5 && lambda > 0.0 && x >= 0.0))
    throw DomainError("verify_scale_invariance_power: parameters out of range");
  const auto scaled =
      DInverseDistribution::power_drift(c * std::pow(lambda, 0.5 - alpha), alpha, std::sqrt(lambda) * x);
  const auto target = DInverseDistribution::power_drift(c, alpha, x);
  double worst = 0.0;
  for (double t : t_grid) worst = std::max(worst, std::abs(scaled.cdf(lambda * t) - target.cdf(t)));
  return worst;
}

double verify_scale_invariance_explosion(double t0, double lambda, double x,
                                         std::span<const double> t_grid) {
  if (!(t0 > 0.0 && lambda > 0.0 && x >= 0.0))
    throw DomainError("verify_scale_invariance_explosion: parameters out of range");
  const auto scaled = DInverseDistribution::explosion(lambda * t0, std::sqrt(lambda) * x);
  const auto target = DInverseDistribution::explosion(t0, x);
  double worst = 0.0;
  for (double t : t_grid) worst = std::max(worst, std::abs(scaled.cdf(lambda * t) - target.cdf(t)));
  return worst;
}

ConvergenceTrace verify_scaling_convergence(const ScalingFamily& family,
                                            const ScalingLimitReport& report, double x,
                                            double t) {
  if (!(t > 0.0)) throw DomainError("verify_scaling_convergence: t must be > 0");
  if (!(x >= 0.0)) throw DomainError("verify_scaling_convergence: x must be >= 0");
  ConvergenceTrace tr;
  const LimitLaw limit = limit_law(report, x);
  const double target = limit.cdf(t);
  if (report.kind == ScalingCase::Explosion && std::abs(t - report.t0) <= 0.01 * report.t0)
    tr.near_discontinuity = true;
  for (double lam : family.lambda_grid) {
    const double h = std::exp(family.log_h(lam, t));
    double level_term = 0.0;
    if (x != 0.0)
      level_term = x * std::exp(family.phi2.log_value(lam) - 0.5 * std::log(lam * t));
    double arg = h - level_term;
    if (std::isnan(arg)) arg = h == kInf ? kInf : -kInf;
    tr.lambdas.push_back(lam);
    tr.gaps.push_back(std::abs(normal_cdf(arg) - target));
  }
  if (tr.near_discontinuity) {
    tr.converged = true;
    return tr;
  }
  const std::size_t k = std::min(kTail, tr.gaps.size());
  const auto tail = std::span<const double>(tr.gaps).subspan(tr.gaps.size() - k);
  bool decreasing = true;
  for (std::size_t i = 1; i < tail.size(); ++i)
    if (tail[i] > tail[i - 1] + 1e-15) decreasing = false;
  tr.converged = decreasing && tail.back() < kConvergenceGap;
  return tr;
}

ConvergenceTrace verify_scaling_convergence(const ScalingFamily& family, double x, double t) {
  const ScalingLimitReport rep = classify(family);
  if (rep.kind == ScalingCase::Degenerate)
    throw DomainError("verify_scaling_convergence: degenerate limit");
  return verify_scaling_convergence(family, rep, x, t);
}

}  // namespace dinv
