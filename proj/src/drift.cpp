#include "dinv/drift.hpp"

#include "dinv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dinv {

namespace {

double tabulated_value(const std::vector<Knot>& k, Interpolation mode, double t) {
  const auto n = k.size();
  if (n == 1) return k.front().rho;
  // First knot with knot.t > t.
  const auto it = std::upper_bound(k.begin(), k.end(), t,
                                   [](double v, const Knot& kn) { return v < kn.t; });
  if (mode == Interpolation::Step) {
    if (it == k.begin()) return k.front().rho;
    return std::prev(it)->rho;
  }
  std::size_t i;
  if (it == k.begin())
    i = 0;
  else if (it == k.end())
    i = n - 2;
  else
    i = static_cast<std::size_t>(std::distance(k.begin(), it)) - 1;
  const Knot& a = k[i];
  const Knot& b = k[i + 1];
  const double v = a.rho + (b.rho - a.rho) * (t - a.t) / (b.t - a.t);
  return std::max(0.0, v);
}

void require_finite_nonneg(double v, const char* what) {
  if (!(std::isfinite(v) && v >= 0.0))
    throw DomainError(std::string("drift parameter ") + what + " must be finite and >= 0");
}

}  // namespace

const char* to_string(DriftKind kind) noexcept {
  switch (kind) {
    case DriftKind::Zero: return "zero";
    case DriftKind::Constant: return "constant";
    case DriftKind::Power: return "power";
    case DriftKind::ExpPower: return "exp-power";
    case DriftKind::Explosion: return "explosion";
    case DriftKind::Tabulated: return "tabulated";
    case DriftKind::Custom: return "custom";
  }
  return "unknown";
}

DriftFunction DriftFunction::zero() { return DriftFunction{}; }

DriftFunction DriftFunction::constant(double c) {
  require_finite_nonneg(c, "c");
  DriftFunction d;
  d.kind_ = DriftKind::Constant;
  d.c_ = c;
  d.alpha_ = 1.0;
  return d;
}

DriftFunction DriftFunction::power(double c, double alpha) {
  require_finite_nonneg(c, "c");
  require_finite_nonneg(alpha, "alpha");
  DriftFunction d;
  d.kind_ = DriftKind::Power;
  d.c_ = c;
  d.alpha_ = alpha;
  return d;
}

DriftFunction DriftFunction::exp_power(double c, double alpha, double gamma) {
  require_finite_nonneg(c, "c");
  require_finite_nonneg(alpha, "alpha");
  if (!std::isfinite(gamma)) throw DomainError("drift parameter gamma must be finite");
  DriftFunction d;
  d.kind_ = DriftKind::ExpPower;
  d.c_ = c;
  d.alpha_ = alpha;
  d.gamma_ = gamma;
  return d;
}

DriftFunction DriftFunction::explosion(double t0) {
  if (!(std::isfinite(t0) && t0 > 0.0))
    throw DomainError("explosion time t0 must be finite and > 0");
  DriftFunction d;
  d.kind_ = DriftKind::Explosion;
  d.t0_ = t0;
  return d;
}

DriftFunction DriftFunction::tabulated(std::vector<Knot> knots, Interpolation mode) {
  if (knots.empty()) throw DomainError("tabulated drift needs at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].t) || knots[i].t < 0.0)
      throw DomainError("tabulated drift: knot times must be finite and >= 0");
    if (!std::isfinite(knots[i].rho) || knots[i].rho < 0.0)
      throw DomainError("tabulated drift: values must be finite and >= 0");
    if (i > 0 && !(knots[i].t > knots[i - 1].t))
      throw DomainError("tabulated drift: knot times must be strictly increasing");
  }
  DriftFunction d;
  d.kind_ = DriftKind::Tabulated;
  d.mode_ = mode;
  d.knots_ = std::make_shared<const std::vector<Knot>>(std::move(knots));
  return d;
}

DriftFunction DriftFunction::custom(std::function<double(double)> eval,
                                    std::function<double(double)> log_eval) {
  if (!eval) throw DomainError("custom drift: empty evaluator");
  DriftFunction d;
  d.kind_ = DriftKind::Custom;
  d.eval_ = std::move(eval);
  d.log_eval_ = std::move(log_eval);
  return d;
}

double DriftFunction::operator()(double t) const {
  switch (kind_) {
    case DriftKind::Zero: return 0.0;
    case DriftKind::Constant: return c_ * t;
    case DriftKind::Power:
      if (c_ == 0.0) return 0.0;
      return c_ * std::pow(t, alpha_);
    case DriftKind::ExpPower:
      if (c_ == 0.0 || t <= 0.0) return 0.0;
      return c_ * std::pow(t, alpha_) * std::exp(-gamma_ / t);
    case DriftKind::Explosion: return t < t0_ ? 0.0 : kInf;
    case DriftKind::Tabulated: return tabulated_value(*knots_, mode_, t);
    case DriftKind::Custom: return eval_(t);
  }
  return 0.0;
}

double DriftFunction::log_value(double t) const {
  switch (kind_) {
    case DriftKind::Zero: return -kInf;
    case DriftKind::Constant:
      if (c_ == 0.0) return -kInf;
      return std::log(c_) + std::log(t);
    case DriftKind::Power:
      if (c_ == 0.0) return -kInf;
      return std::log(c_) + alpha_ * std::log(t);
    case DriftKind::ExpPower:
      if (c_ == 0.0 || t <= 0.0) return -kInf;
      return std::log(c_) + alpha_ * std::log(t) - gamma_ / t;
    case DriftKind::Explosion: return t < t0_ ? -kInf : kInf;
    case DriftKind::Custom:
      if (log_eval_) return log_eval_(t);
      return std::log(eval_(t));
    case DriftKind::Tabulated: return std::log((*this)(t));
  }
  return -kInf;
}

std::span<const Knot> DriftFunction::knots() const noexcept {
  if (!knots_) return {};
  return {knots_->data(), knots_->size()};
}

std::string DriftFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case DriftKind::Zero: os << "zero"; break;
    case DriftKind::Constant: os << "constant(c=" << c_ << ")"; break;
    case DriftKind::Power: os << "power(c=" << c_ << ", alpha=" << alpha_ << ")"; break;
    case DriftKind::ExpPower:
      os << "exp-power(c=" << c_ << ", alpha=" << alpha_ << ", gamma=" << gamma_ << ")";
      break;
    case DriftKind::Explosion: os << "explosion(t0=" << t0_ << ")"; break;
    case DriftKind::Tabulated:
      os << "tabulated(" << knots_->size() << " knots, "
         << (mode_ == Interpolation::Step ? "step" : "linear") << ")";
      break;
    case DriftKind::Custom: os << "custom"; break;
  }
  return os.str();
}

std::vector<double> default_probe_grid() { return log_grid(1e-8, 1e8, 200); }

ConditionA verify_condition_a(const DriftFunction& drift, std::span<const double> grid,
                              double tol) {
  switch (drift.kind()) {
    case DriftKind::Zero:
    case DriftKind::Constant:
    case DriftKind::Explosion:
      return {};
    case DriftKind::Power:
      if (drift.alpha() >= 0.5 || drift.c() == 0.0) return {};
      {
        // rho(t)/sqrt(t) = c t^(alpha - 1/2) strictly decreases; t = 1, 4 witness it.
        const double v1 = drift.c();
        const double v4 = drift.c() * std::pow(4.0, drift.alpha() - 0.5);
        return {false, 1.0, 4.0, v1, v4};
      }
    default:
      break;
  }

  if (grid.empty()) throw DomainError("verify_condition_a: empty grid");
  ConditionA res;
  bool have = false;
  double prev_t = 0.0;
  double max_t = 0.0;
  double max_v = 0.0;
  for (double t : grid) {
    if (!(t > 0.0) || (have && !(t > prev_t)))
      throw DomainError("verify_condition_a: grid must be positive and strictly increasing");
    prev_t = t;
    const double r = drift(t);
    if (std::isnan(r) || r < 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << "verify_condition_a: drift value " << r << " at t = " << t
         << " is not a non-negative extended real";
      throw EvaluationError(os.str());
    }
    const double v = r / std::sqrt(t);
    if (have) {
      const double scale = std::isfinite(max_v) ? std::max(1.0, std::abs(max_v)) : 1.0;
      if (v < max_v - tol * scale) {
        res = {false, max_t, t, max_v, v};
        return res;
      }
    }
    if (!have || v > max_v) {
      max_t = t;
      max_v = v;
      have = true;
    }
  }
  return res;
}

ConditionA verify_condition_a(const DriftFunction& drift) {
  const auto grid = default_probe_grid();
  return verify_condition_a(drift, grid);
}

EtaCurve::EtaCurve(DriftFunction drift, double x) : drift_(std::move(drift)), x_(x) {
  if (!(x >= 0.0) || std::isinf(x)) throw DomainError("eta: level x must be finite and >= 0");
}

double EtaCurve::operator()(double t) const { return (drift_(t) - x_) / std::sqrt(t); }

MonotoneFn EtaCurve::as_monotone() const {
  return MonotoneFn([curve = *this](double t) { return curve(t); }, 0.0, kInf, false, false);
}

EtaCurve eta(const DriftFunction& drift, double x) { return EtaCurve(drift, x); }

DriftFunction load_drift_csv(const std::filesystem::path& path, Interpolation mode) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open drift table " + path.string());

  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };

  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<Knot> knots;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    const std::string a = trim(line.substr(0, comma));
    const std::string b = trim(line.substr(comma + 1));
    if (!header) {
      if (a != "t" || b != "rho")
        throw IoError(path.string() + ": header must be `t,rho`");
      header = true;
      continue;
    }
    Knot k{};
    try {
      std::size_t pa = 0, pb = 0;
      k.t = std::stod(a, &pa);
      k.rho = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": not a number");
    }
    if (!knots.empty() && !(k.t > knots.back().t))
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": t must be strictly increasing");
    if (!(k.rho >= 0.0) || !std::isfinite(k.rho))
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": rho must be >= 0");
    knots.push_back(k);
  }
  if (!header) throw IoError(path.string() + ": missing `t,rho` header");
  if (knots.empty()) throw IoError(path.string() + ": no data rows");
  try {
    return DriftFunction::tabulated(std::move(knots), mode);
  } catch (const DomainError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace dinv
