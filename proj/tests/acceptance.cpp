// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any failure.
#include "oracles.hpp"

#include <dinv/dinverse.hpp>
#include <dinv/drift.hpp>
#include <dinv/errors.hpp>
#include <dinv/finance.hpp>
#include <dinv/montecarlo.hpp>
#include <dinv/numerics.hpp>
#include <dinv/scaling.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace dinv;

namespace {

constexpr double kInfty = std::numeric_limits<double>::infinity();

// Test-side normal CDF, independent of the library.
double phi(double z) {
  if (z == kInfty) return 1.0;
  if (z == -kInfty) return 0.0;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* what, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %s  %s  [%s] (%.1fs)\n", id, o.pass ? "PASS" : "FAIL", what, o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// ---- AC1 ----

struct Case {
  DriftFunction drift;
  std::function<double(double)> rho;  // test-side oracle
  std::string name;
};

// Piecewise linear through the knots, end segments extended and clamped at 0.
double interp(const std::vector<Knot>& k, double t) {
  std::size_t i = 0;
  if (t >= k.back().t) i = k.size() - 2;
  else if (t > k.front().t)
    while (k[i + 1].t <= t) ++i;
  const double w = (t - k[i].t) / (k[i + 1].t - k[i].t);
  return std::max(0.0, k[i].rho + w * (k[i + 1].rho - k[i].rho));
}

std::vector<Case> random_drifts() {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> uc(0.1, 5.0), ua(0.5, 3.0), ut(0.05, 20.0);
  std::vector<Case> out;
  for (int i = 0; i < 8; ++i) {
    const double c = uc(gen), a = i == 0 ? 0.5 : ua(gen);
    out.push_back({DriftFunction::power(c, a), [=](double t) { return c * std::pow(t, a); },
                   fmt("power(%.3g,%.3g)", c, a)});
  }
  for (int i = 0; i < 5; ++i) {
    const double c = uc(gen);
    out.push_back({DriftFunction::constant(c), [=](double t) { return c * t; }, fmt("constant(%.3g)", c)});
  }
  for (int i = 0; i < 5; ++i) {
    const double t0 = ut(gen);
    out.push_back({DriftFunction::explosion(t0), [=](double t) { return t < t0 ? 0.0 : kInfty; },
                   fmt("explosion(%.3g)", t0)});
  }
  for (double a : {1.5, 2.0}) {
    const double c = uc(gen);
    std::vector<Knot> k;
    for (double t : logspace(1e-3, 1e3, 40)) k.push_back({t, c * std::pow(t, a)});
    out.push_back({DriftFunction::tabulated(k, Interpolation::Linear),
                   [k](double t) { return interp(k, t); }, fmt("tabulated(%.3g t^%.2g)", c, a)});
  }
  return out;
}

Outcome ac1() {
  const auto grid = logspace(1e-3, 1e3, 100);
  double worst = 0.0;
  std::string where;
  for (const auto& cs : random_drifts())
    for (double x : {0.0, 0.5, 1.0, 5.0}) {
      DInverseDistribution d(cs.drift, x);
      for (double t : grid) {
        const double r = cs.rho(t);
        const double eta = r == kInfty ? kInfty : (r - x) / std::sqrt(t);
        const double gap = std::abs(d.cdf(t) - phi(eta));
        if (gap > worst) worst = gap, where = cs.name + fmt(" x=%g t=%.3g", x, t);
      }
    }
  return {worst <= 1e-12, fmt("20 drifts, max gap %.2e", worst) + (where.empty() ? "" : " at " + where)};
}

// ---- AC2 ----

Outcome ac2() {
  const std::vector<std::pair<std::string, DInverseDistribution>> laws = {
      {"zero", DInverseDistribution::zero_drift(1.3)},
      {"constant", DInverseDistribution::constant_drift(0.7, 2.0)},
      {"power", DInverseDistribution::power_drift(1.5, 2.5, 0.8)},
      {"explosion", DInverseDistribution::explosion(2.0, 1.0)},
  };
  SeededStream rng(99);
  std::vector<double> z(10000);
  for (auto& v : z) v = rng.normal();
  double worst = 0.0;
  for (const auto& [name, d] : laws)
    for (double v : z) {
      const double a = d.invert_generic(v), b = d.invert_closed(v);
      if (a == b) continue;
      if (std::isinf(a) || std::isinf(b)) return {false, name + ": finite/infinite mismatch"};
      worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    }
  return {worst <= 1e-9, fmt("4 forms x 1e4 shared draws, max rel gap %.2e", worst)};
}

// ---- AC3 ----

Outcome ac3() {
  const std::vector<DInverseDistribution> laws = {
      DInverseDistribution::zero_drift(1.0), DInverseDistribution::constant_drift(1.0, 1.0),
      DInverseDistribution::power_drift(2.0, 1.5, 1.0), DInverseDistribution::explosion(2.0, 1.0)};
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::ostringstream msg;
  bool ok = true;
  double worst_ratio = 0.0;
  for (const auto& d : laws)
    for (std::uint64_t seed : {101u, 202u, 303u}) {
      const auto s = sample_parallel(d, SeededStream(seed), 100000, threads);
      const auto chk = check_law(s, [&](double t) { return d.cdf(t); }, d.defect_mass());
      worst_ratio = std::max(worst_ratio, chk.ks / chk.critical);
      if (!chk.pass) {
        ok = false;
        msg << to_string(d.closed_form()) << " seed " << seed << " ks=" << chk.ks
            << " defect=" << chk.defect.fraction << "; ";
      }
    }
  return {ok, fmt("n=1e5, 3 seeds, max ks/critical %.3f", worst_ratio) + " " + msg.str()};
}

// ---- AC4 ----

Outcome ac4() {
  const double crit = ks_critical_two_sample(100000, 100000);
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (auto [c, x] : std::vector<std::pair<double, double>>{{1, 1}, {2, 0.5}, {0.3, 1.7}}) {
    SeededStream rng(SeededStream::kDefaultSeed, stream++);
    worst = std::max(worst, duality_check(c, x, 100000, rng));
  }
  return {worst < crit, fmt("max two-sample ks %.4f, critical %.4f", worst, crit)};
}

// ---- AC5 ----

Outcome ac5() {
  const auto grid = logspace(1e-3, 1e3, 60);
  double worst = 0.0;
  for (double c : {0.5, 1.0, 3.0})
    for (double a : {0.5, 1.0, 2.0})
      for (double l : {0.25, 4.0})
        for (double x : {0.0, 1.0}) {
          worst = std::max(worst, verify_scale_invariance_power(c, a, l, x, grid));
          // Independent: P(Z^(c l^(1/2-a), a)_{sqrt(l) x} <= l t) against N((c t^a - x)/sqrt t).
          const auto z = DInverseDistribution::power_drift(c * std::pow(l, 0.5 - a), a, std::sqrt(l) * x);
          for (double t : grid)
            worst = std::max(worst, std::abs(z.cdf(l * t) - phi((c * std::pow(t, a) - x) / std::sqrt(t))));
        }
  return {worst <= 1e-12, fmt("36 parameter sets, max gap %.2e", worst)};
}

// ---- AC6 ----

Outcome ac6() {
  const auto grid = logspace(1e-3, 1e3, 80);
  double worst = 0.0;
  for (double t0 : {0.5, 2.0, 7.0})
    for (double l : {0.25, 4.0})
      for (double x : {0.0, 1.0}) {
        worst = std::max(worst, verify_scale_invariance_explosion(t0, l, x, grid));
        const auto scaled = DInverseDistribution::zero_drift(std::sqrt(l) * x);
        for (double t : grid) {
          const double lhs = t >= t0 ? 1.0 : scaled.cdf(l * t);
          const double rhs = t >= t0 ? 1.0 : phi(-x / std::sqrt(t));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
  return {worst <= 1e-12, fmt("max gap %.2e", worst)};
}

// ---- AC7 / AC8 ----

ScalingFamily power_fixture() {
  return {DriftFunction::power(1.0, 2.0), ScalingFunction::power_law(3.0, -1.5),
          ScalingFunction::power_law(1.0, 0.5)};
}

bool near(double got, double want) { return std::abs(got - want) <= 0.01 * std::abs(want); }

Outcome ac7() {
  std::ostringstream msg;
  bool ok = true;
  auto run = [&](const char* name, const ScalingFamily& fam, ScalingCase want,
                 const std::function<bool(const ScalingLimitReport&)>& params) {
    const auto r = classify(fam);
    const bool good = r.kind == want && near(r.p, 1.0) && params(r);
    ok = ok && good;
    msg << name << (good ? " ok" : " BAD") << " (p=" << r.p;
    if (r.kind == ScalingCase::Explosion) msg << " t0=" << r.t0;
    if (r.kind == ScalingCase::PowerDrift) msg << " c=" << r.c << " alpha=" << r.alpha;
    msg << "); ";
  };
  run("ZeroDrift",
      {DriftFunction::constant(1.0), ScalingFunction::power_law(1.0, 1.0), ScalingFunction::power_law(1.0, 0.5)},
      ScalingCase::ZeroDrift, [](const auto&) { return true; });
  run("Explosion",
      {DriftFunction::exp_power(1.0, 1.0, 1.0), ScalingFunction::power_law(1.0, -0.5, 0.5),
       ScalingFunction::power_law(1.0, 0.5)},
      ScalingCase::Explosion, [](const auto& r) { return near(r.t0, 2.0); });
  run("PowerDrift", power_fixture(), ScalingCase::PowerDrift,
      [](const auto& r) { return near(r.c, 3.0) && near(r.alpha, 2.0); });
  run("Degenerate",
      {DriftFunction::constant(1.0), ScalingFunction::power_law(1.0, -1.0), ScalingFunction::power_law(1.0, 0.5)},
      ScalingCase::Degenerate, [](const auto&) { return true; });
  return {ok, msg.str()};
}

Outcome ac8() {
  const auto fam = power_fixture();
  const auto rep = classify(fam);
  const double l = std::ldexp(1.0, -40);
  double worst = 0.0;
  for (double x : {0.0, 1.0})
    for (double t : {0.5, 1.0, 2.0}) {
      const auto tr = verify_scaling_convergence(fam, rep, x, t);
      if (tr.lambdas.back() != l) return {false, "lambda grid does not end at 2^-40"};
      worst = std::max(worst, tr.gaps.back());
      // Against the exact limit Z^(3,2)_x, p = 1.
      const double scale = fam.phi1(l);
      DInverseDistribution finite(
          DriftFunction::custom([scale](double s) { return scale * s * s; }), fam.phi2(l) * x);
      worst = std::max(worst, std::abs(finite.cdf(l * t) - phi((3.0 * t * t - x) / std::sqrt(t))));
    }
  return {worst < 1e-6, fmt("max gap at 2^-40: %.2e", worst)};
}

// ---- AC9 ----

Outcome ac9() {
  const double c1 = black_scholes_call(1.0, 1.0, 1.0, 1.0);
  const double err = std::abs(c1 - oracle::kBsUnit);
  const auto grid = log_grid(1e-2, 1e4, 400);
  const auto v = call_price_monotonicity(GBMSpec::constant(1.0, 1.0, 0.0), 1.0, grid,
                                         SeededStream::kDefaultSeed, kDefaultPaths, 1e-12);
  const bool bounded = std::all_of(v.curve.begin(), v.curve.end(),
                                   [](const PricePoint& p) { return !p.monte_carlo && p.price <= 1.0; });
  return {err <= 1e-12 && v.increasing && bounded,
          fmt("C(1)=%.16f, |err|=%.1e", c1, err) + (v.increasing ? ", increasing on 400 points" : ", NOT increasing")};
}

// ---- AC10 ----

Outcome ac10() {
  int refusals = 0, mismatched = 0;
  double worst = 0.0;
  const auto tg = logspace(1e-2, 1e2, 40);
  for (double sigma : {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.5, 1.8, 2.2, 3.0})
    for (double delta : {-1.0, -0.3, -0.05, -1e-6, 0.0, 1e-6, 0.05, 0.3, 1.0, 2.5}) {
      const double mu = 0.5 * sigma * sigma + delta;
      const double mt = mu - 0.5 * sigma * sigma;
      const double s0 = 1.3, s = 2.1;
      const auto spec = GBMSpec::constant(s0, sigma, mu);
      bool refused = false;
      try {
        const auto law = gbm_dinverse(spec, s);
        const double c = mt / sigma, x = std::log(s / s0) / sigma;
        for (double t : tg) worst = std::max(worst, std::abs(law.cdf(t) - phi((c * t - x) / std::sqrt(t))));
      } catch (const NotDIncreasingError&) {
        refused = true;
        ++refusals;
      }
      if (refused != (mt < 0.0)) ++mismatched;
    }
  return {mismatched == 0 && worst <= 1e-10,
          fmt("100 points, %g refusals, ", refusals) + fmt("%g mismatches, max cdf gap %.2e", mismatched, worst)};
}

// ---- AC11 ----

Outcome ac11() {
  const GBMSpec fixture(1.0, Coefficient::function([](double t) { return std::sqrt(2.0 * t); }),
                        Coefficient::function([](double t) { return 2.0 * t; }));
  const auto red = reduce_functional_gbm(fixture);
  double worst = 0.0;
  for (double t : logspace(0.01, 50, 200)) worst = std::max(worst, std::abs(red.rho(t) - t / 2));

  // Constant coefficients: rho(s) = mu_tilde s / sigma^2 and the reduced law
  // reproduces the terminal survival.
  double round = 0.0;
  for (auto [sigma, mu] : std::vector<std::pair<double, double>>{{0.5, 0.3}, {1.2, 1.0}, {2.0, 0.1}}) {
    const auto spec = GBMSpec::constant(1.5, sigma, mu);
    const auto r = reduce_functional_gbm(spec);
    const double mt = mu - 0.5 * sigma * sigma;
    for (double t : logspace(0.05, 20, 30)) {
      const double a = sigma * sigma * t;
      round = std::max(round, std::abs(r.rho(a) - mt * a / (sigma * sigma)));
      for (double xs : {1.0, 1.5, 3.0}) {
        const double via = phi((r.rho(r.a(t)) - std::log(xs / 1.5)) / std::sqrt(r.a(t)));
        round = std::max(round, std::abs(via - gbm_terminal_survival(spec, xs, t)));
      }
    }
  }
  return {worst <= 1e-6 && round <= 1e-9, fmt("rho gap %.2e, constant round-trip %.2e", worst, round)};
}

// ---- AC12 ----

// Test-side Black-Scholes.
double bs(double s0, double sigma, double k, double t) {
  const double v = sigma * std::sqrt(t);
  const double d1 = (std::log(s0 / k) + 0.5 * v * v) / v;
  return s0 * phi(d1) - k * phi(d1 - v);
}

Outcome ac12() {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> us0(0.5, 2.0), usig(0.1, 1.5), uk(0.3, 3.0), ut(0.05, 5.0);
  double worst = 0.0, oracle_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double s0 = us0(gen), sigma = usig(gen), k = uk(gen), t = ut(gen);
    const auto spec = GBMSpec::constant(s0, sigma, 0.0);
    const double v = increasing_expectation(
        [&](double x) { return gbm_terminal_survival(spec, x, t); }, PhiKnots::call(k));
    worst = std::max(worst, std::abs(v - black_scholes_call(s0, sigma, k, t)));
    oracle_gap = std::max(oracle_gap, std::abs(v - bs(s0, sigma, k, t)));
  }
  const double frozen = std::abs(
      increasing_expectation(
          [](double x) { return gbm_terminal_survival(GBMSpec::constant(1.3, 0.4, 0.0), x, 2.5); },
          PhiKnots::call(0.8)) -
      oracle::kBsGeneric);
  worst = std::max({worst, oracle_gap, frozen});
  return {worst <= 1e-6, fmt("20 parameter sets, max gap %.2e", worst)};
}

// ---- AC13 ----

std::string capture(const std::string& args, int& code) {
  const std::string cmd = std::string(DINV_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::array<char, 65536> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int st = pclose(p);
  code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

Outcome ac13() {
  std::ostringstream msg;
  bool ok = true;
  for (const char* drift : {"--zero", "--power c=2 alpha=1.5", "--explosion t0=2"}) {
    const std::string base = std::string("sample ") + drift + " --x 1 --n 100000 --seed 424242";
    int c1, c2, c3;
    const auto a = capture(base + " --threads 1", c1);
    const auto b = capture(base + " --threads 1", c2);
    const auto c = capture(base + " --threads 8", c3);
    const bool good = c1 == 0 && c2 == 0 && c3 == 0 && a == b && a == c && a.size() > 100000;
    ok = ok && good;
    msg << drift << (good ? " identical" : " DIFFERS") << " (" << a.size() << " bytes); ";
  }
  return {ok, msg.str()};
}

}  // namespace

int main() {
  report("AC1", "cdf equals N(eta)", ac1);
  report("AC2", "generic vs closed-form sampler", ac2);
  report("AC3", "Monte Carlo law check", ac3);
  report("AC4", "duality", ac4);
  report("AC5", "power scale invariance", ac5);
  report("AC6", "explosion scale invariance", ac6);
  report("AC7", "scaling classifier fixtures", ac7);
  report("AC8", "scaling convergence", ac8);
  report("AC9", "Black-Scholes value and monotonicity", ac9);
  report("AC10", "GBM d-inverse refusal and law", ac10);
  report("AC11", "functional-coefficient reduction", ac11);
  report("AC12", "increasing-expectation decomposition", ac12);
  report("AC13", "sample reproducibility", ac13);
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
