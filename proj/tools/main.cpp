// Command-line front end. Talks to the library only through dinv.h.

#include "dinv/dinv.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kRefused = 1, kInput = 2, kNonConvergence = 3 };

struct Failure {
  int code;
  std::string message;
  std::string detail;
};

int exit_for(dinv_status st) {
  switch (st) {
    case DINV_OK: return kOk;
    case DINV_ERR_NOT_D_INCREASING:
    case DINV_ERR_DEGENERATE_TIME_CHANGE: return kRefused;
    case DINV_ERR_CLASSIFICATION:
    case DINV_ERR_INCONSISTENT:
    case DINV_ERR_INTERNAL: return kNonConvergence;
    default: return kInput;
  }
}

void check(dinv_status st) {
  if (st != DINV_OK) throw Failure{exit_for(st), dinv_last_error(), dinv_last_error_detail()};
}

[[noreturn]] void input_error(const std::string& msg) { throw Failure{kInput, msg, {}}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Drift = std::unique_ptr<dinv_drift, Deleter<dinv_drift, dinv_drift_free>>;
using Law = std::unique_ptr<dinv_law, Deleter<dinv_law, dinv_law_free>>;
using Family = std::unique_ptr<dinv_family, Deleter<dinv_family, dinv_family_free>>;
using Report = std::unique_ptr<dinv_report, Deleter<dinv_report, dinv_report_free>>;
using Gbm = std::unique_ptr<dinv_gbm, Deleter<dinv_gbm, dinv_gbm_free>>;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "+inf") return INFINITY;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    input_error("cannot parse " + what + " value '" + s + "'");
  }
}

double as_double(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>(), what);
  input_error(what + " must be a number");
}

// "c=1 alpha=2" tokens (or comma separated) into an object.
json parse_kv(const std::vector<std::string>& tokens, const std::string& what) {
  json obj = json::object();
  for (const auto& tok : tokens) {
    std::stringstream ss(tok);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) input_error(what + ": expected key=value, got '" + item + "'");
      obj[item.substr(0, eq)] = parse_double(item.substr(eq + 1), what + "." + item.substr(0, eq));
    }
  }
  return obj;
}

// Object with exactly the allowed keys; `required` must all be present.
std::map<std::string, double> params(const json& obj, const std::string& what,
                                     const std::set<std::string>& allowed,
                                     const std::set<std::string>& required,
                                     std::map<std::string, double> defaults = {}) {
  if (!obj.is_object()) input_error(what + " expects key=value parameters");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) input_error(what + ": unknown parameter '" + it.key() + "'");
    defaults[it.key()] = as_double(it.value(), what + "." + it.key());
  }
  for (const auto& r : required)
    if (!defaults.count(r)) input_error(what + ": missing parameter '" + r + "'");
  return defaults;
}

std::vector<double> parse_grid(const json& g, const std::string& what) {
  std::vector<double> out;
  if (g.is_array()) {
    for (const auto& v : g) out.push_back(as_double(v, what));
    return out;
  }
  if (g.is_number()) return {g.get<double>()};
  if (!g.is_string()) input_error(what + " must be a list or a grid string");
  const auto s = g.get<std::string>();
  if (s.rfind("log:", 0) == 0 || s.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) input_error(what + ": expected log:lo:hi:n or lin:lo:hi:n");
    const double lo = parse_double(parts[1], what);
    const double hi = parse_double(parts[2], what);
    const double nd = parse_double(parts[3], what);
    if (!(nd >= 2) || nd != std::floor(nd)) input_error(what + ": n must be an integer >= 2");
    const auto n = static_cast<std::size_t>(nd);
    const bool log = parts[0] == "log";
    if (log && !(lo > 0 && hi > lo)) input_error(what + ": log grid needs 0 < lo < hi");
    if (!log && !(hi > lo)) input_error(what + ": grid needs lo < hi");
    for (std::size_t i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                        : lo + f * (hi - lo));
    }
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) input_error(what + " is empty");
  return out;
}

struct Tolerances {
  double root = 0.0;         // 0 keeps the library default
  double condition_a = 0.0;  // 0 keeps the library default
  double ks_alpha = 0.01;
};

Tolerances tolerances(const json& cfg) {
  Tolerances t;
  if (!cfg.contains("tol")) return t;
  const auto p = params(cfg["tol"], "tol", {"root", "condition_a", "ks_alpha"}, {});
  if (p.count("root")) t.root = p.at("root");
  if (p.count("condition_a")) t.condition_a = p.at("condition_a");
  if (p.count("ks_alpha")) t.ks_alpha = p.at("ks_alpha");
  return t;
}

const char* kDriftKeys[] = {"zero", "constant", "power", "explosion", "exppower", "csv"};

Drift make_drift(const json& cfg) {
  std::vector<std::string> given;
  for (const char* k : kDriftKeys)
    if (cfg.contains(k) && !(cfg[k].is_boolean() && !cfg[k].get<bool>())) given.push_back(k);
  if (given.empty()) input_error("no drift given (use --zero, --constant, --power, --explosion, --exppower or --csv)");
  if (given.size() > 1) input_error("more than one drift given: --" + given[0] + " and --" + given[1]);
  const auto& kind = given[0];
  dinv_drift* d = nullptr;
  if (kind == "zero") {
    check(dinv_drift_zero(&d));
  } else if (kind == "constant") {
    const auto p = params(cfg[kind], "constant", {"c"}, {"c"});
    check(dinv_drift_constant(p.at("c"), &d));
  } else if (kind == "power") {
    const auto p = params(cfg[kind], "power", {"c", "alpha"}, {"c", "alpha"});
    check(dinv_drift_power(p.at("c"), p.at("alpha"), &d));
  } else if (kind == "explosion") {
    const auto p = params(cfg[kind], "explosion", {"t0"}, {"t0"});
    check(dinv_drift_explosion(p.at("t0"), &d));
  } else if (kind == "exppower") {
    const auto p = params(cfg[kind], "exppower", {"c", "alpha", "gamma"}, {"c", "alpha", "gamma"});
    check(dinv_drift_exp_power(p.at("c"), p.at("alpha"), p.at("gamma"), &d));
  } else {
    if (!cfg[kind].is_string()) input_error("csv must be a path");
    const bool linear = cfg.value("linear", false);
    check(dinv_drift_load_csv(cfg[kind].get<std::string>().c_str(), linear ? 1 : 0, &d));
  }
  return Drift(d);
}

dinv_scaling_form scaling_form(const json& obj, const std::string& what) {
  const auto p = params(obj, what, {"k", "beta", "gamma"}, {"k"}, {{"beta", 0.0}, {"gamma", 0.0}});
  return {p.at("k"), p.at("beta"), p.at("gamma")};
}

class Output {
public:
  explicit Output(const json& cfg) {
    if (cfg.contains("out")) {
      file_.open(cfg["out"].get<std::string>(), std::ios::binary);
      if (!file_) input_error("cannot open output file " + cfg["out"].get<std::string>());
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

bool want_json(const json& cfg) {
  const auto f = cfg.value("format", std::string("csv"));
  if (f != "csv" && f != "json") input_error("format must be csv or json");
  return f == "json";
}

int cmd_check_drift(const json& cfg) {
  const auto drift = make_drift(cfg);
  const auto tol = tolerances(cfg);
  dinv_condition_a r{};
  check(dinv_drift_check_condition_a(drift.get(), nullptr, 0, tol.condition_a, &r));
  Output out(cfg);
  if (want_json(cfg)) {
    json j{{"condition_a", r.satisfied ? "Satisfied" : "Violated"}};
    if (!r.satisfied)
      j["witness"] = {{"t_i", jnum(r.t_i)}, {"t_j", jnum(r.t_j)},
                      {"value_i", jnum(r.value_i)}, {"value_j", jnum(r.value_j)}};
    out.os() << j.dump() << '\n';
  } else if (r.satisfied) {
    out.os() << "Satisfied\n";
  } else {
    out.os() << "Violated: rho(t)/sqrt(t) = " << fmt(r.value_i) << " at t = " << fmt(r.t_i)
             << " exceeds " << fmt(r.value_j) << " at t = " << fmt(r.t_j) << '\n';
  }
  return r.satisfied ? kOk : kRefused;
}

Law make_law(const json& cfg) {
  const auto drift = make_drift(cfg);
  const double x = cfg.contains("x") ? as_double(cfg["x"], "x") : 0.0;
  dinv_law* l = nullptr;
  check(dinv_law_create(drift.get(), x, &l));
  Law law(l);
  const auto tol = tolerances(cfg);
  if (tol.root > 0) check(dinv_law_set_root_tolerance(law.get(), tol.root));
  return law;
}

int cmd_table(const json& cfg) {
  const auto law = make_law(cfg);
  const auto ts = parse_grid(cfg.value("t", json("log:0.01:100:41")), "t");
  const auto us = cfg.contains("u") ? parse_grid(cfg["u"], "u") : std::vector<double>{};
  std::vector<double> cdf(ts.size()), q(us.size());
  for (std::size_t i = 0; i < ts.size(); ++i) check(dinv_law_cdf(law.get(), ts[i], &cdf[i]));
  for (std::size_t i = 0; i < us.size(); ++i) check(dinv_law_quantile(law.get(), us[i], &q[i]));
  double defect = 0;
  check(dinv_law_defect_mass(law.get(), &defect));
  Output out(cfg);
  auto& os = out.os();
  if (want_json(cfg)) {
    json j{{"closed_form", dinv_law_closed_form(law.get())}, {"defect_mass", jnum(defect)}};
    j["rows"] = json::array();
    for (std::size_t i = 0; i < ts.size(); ++i) j["rows"].push_back({{"t", jnum(ts[i])}, {"cdf", jnum(cdf[i])}});
    j["quantiles"] = json::array();
    for (std::size_t i = 0; i < us.size(); ++i) j["quantiles"].push_back({{"u", jnum(us[i])}, {"t", jnum(q[i])}});
    os << j.dump() << '\n';
  } else {
    os << "t,cdf\n";
    for (std::size_t i = 0; i < ts.size(); ++i) os << fmt(ts[i]) << ',' << fmt(cdf[i]) << '\n';
    if (!us.empty()) {
      os << "\nu,quantile\n";
      for (std::size_t i = 0; i < us.size(); ++i) os << fmt(us[i]) << ',' << fmt(q[i]) << '\n';
    }
    os << "\ndefect_mass," << fmt(defect) << "\nclosed_form," << dinv_law_closed_form(law.get()) << '\n';
  }
  return kOk;
}

Family make_family(const json& cfg) {
  const auto drift = make_drift(cfg);
  dinv_family* f = nullptr;
  if (cfg.contains("phi_csv")) {
    if (cfg.contains("phi1") || cfg.contains("phi2")) input_error("--phi-csv replaces --phi1/--phi2");
    std::ifstream in(cfg["phi_csv"].get<std::string>());
    if (!in) input_error("cannot open " + cfg["phi_csv"].get<std::string>());
    std::string line;
    std::getline(in, line);
    if (line.rfind("lambda,phi1,phi2", 0) != 0) input_error("phi csv header must be lambda,phi1,phi2");
    std::vector<double> l, p1, p2;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      std::stringstream ss(line);
      std::string a, b, c;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
        input_error("phi csv: malformed row '" + line + "'");
      l.push_back(parse_double(a, "lambda"));
      p1.push_back(parse_double(b, "phi1"));
      p2.push_back(parse_double(c, "phi2"));
    }
    check(dinv_family_create_tabulated(drift.get(), l.data(), p1.data(), p2.data(), l.size(), &f));
  } else {
    if (!cfg.contains("phi1") || !cfg.contains("phi2")) input_error("classify needs --phi1 and --phi2 (or --phi-csv)");
    check(dinv_family_create(drift.get(), scaling_form(cfg["phi1"], "phi1"),
                             scaling_form(cfg["phi2"], "phi2"), &f));
  }
  Family fam(f);
  if (cfg.contains("lambda")) {
    const auto g = parse_grid(cfg["lambda"], "lambda");
    check(dinv_family_set_lambda_grid(fam.get(), g.data(), g.size()));
  }
  if (cfg.contains("t")) {
    const auto g = parse_grid(cfg["t"], "t");
    check(dinv_family_set_t_grid(fam.get(), g.data(), g.size()));
  }
  return fam;
}

int cmd_classify(const json& cfg) {
  const auto fam = make_family(cfg);
  dinv_report* r = nullptr;
  const auto st = dinv_classify(fam.get(), &r);
  Output out(cfg);
  if (st == DINV_ERR_CLASSIFICATION) {
    json j{{"error", dinv_last_error()}};
    const std::string detail = dinv_last_error_detail();
    if (!detail.empty()) j["profile"] = json::parse(detail);
    out.os() << j.dump() << '\n';
    throw Failure{kNonConvergence, dinv_last_error(), {}};
  }
  check(st);
  Report report(r);
  std::size_t needed = 0;
  dinv_report_json(report.get(), nullptr, 0, &needed);
  std::string buf(needed, '\0');
  check(dinv_report_json(report.get(), buf.data(), buf.size(), &needed));
  buf.resize(needed - 1);
  if (want_json(cfg)) {
    out.os() << buf << '\n';
  } else {
    dinv_report_summary s{};
    check(dinv_report_get(report.get(), &s));
    const auto j = json::parse(buf);
    out.os() << "case,p,t0,c,alpha\n"
             << j["case"].get<std::string>() << ',' << fmt(s.p) << ',' << fmt(s.t0) << ','
             << fmt(s.c) << ',' << fmt(s.alpha) << '\n';
  }
  return kOk;
}

// Either a number or a list of [t, value] knots.
void coefficient(const json& cfg, const std::string& key, std::vector<double>& t,
                 std::vector<double>& v, double fallback, bool required) {
  if (!cfg.contains(key)) {
    if (required) input_error("price needs --" + key);
    t = {0.0};
    v = {fallback};
    return;
  }
  const auto& c = cfg[key];
  if (c.is_array()) {
    for (const auto& k : c) {
      if (!k.is_array() || k.size() != 2) input_error(key + " knots must be [t, value] pairs");
      t.push_back(as_double(k[0], key));
      v.push_back(as_double(k[1], key));
    }
    if (t.empty()) input_error(key + " has no knots");
  } else {
    t = {0.0};
    v = {as_double(c, key)};
  }
}

int cmd_price(const json& cfg) {
  std::vector<double> st, sv, mt, mv;
  coefficient(cfg, "sigma", st, sv, 0.0, true);
  coefficient(cfg, "mu", mt, mv, 0.0, false);
  const double s0 = cfg.contains("s0") ? as_double(cfg["s0"], "s0") : 1.0;
  if (!cfg.contains("strike")) input_error("price needs --strike");
  const double k = as_double(cfg["strike"], "strike");
  dinv_gbm* g = nullptr;
  check(dinv_gbm_create(s0, st.data(), sv.data(), st.size(), mt.data(), mv.data(), mt.size(), &g));
  Gbm gbm(g);
  const auto ts = parse_grid(cfg.value("t", json("log:0.01:100:41")), "t");
  const auto seed = cfg.value("seed", dinv_default_seed());
  const auto paths = cfg.value("paths", std::size_t{0});
  std::vector<dinv_price_point> curve(ts.size());
  dinv_monotonicity verdict{};
  check(dinv_gbm_call_curve(gbm.get(), k, ts.data(), ts.size(), seed, paths, curve.data(), &verdict));
  Output out(cfg);
  auto& os = out.os();
  if (want_json(cfg)) {
    json j{{"rows", json::array()}, {"verdict", verdict.increasing ? "Increasing" : "CounterExample"}};
    for (const auto& p : curve)
      j["rows"].push_back({{"t", jnum(p.t)}, {"price", jnum(p.price)},
                           {"std_error", jnum(p.std_error)}, {"monte_carlo", p.monte_carlo != 0}});
    if (!verdict.increasing) j["counterexample"] = {verdict.i, verdict.j};
    os << j.dump() << '\n';
  } else {
    os << "t,price,std_error\n";
    for (const auto& p : curve) os << fmt(p.t) << ',' << fmt(p.price) << ',' << fmt(p.std_error) << '\n';
    os << '\n';
    if (verdict.increasing)
      os << "verdict,Increasing\n";
    else
      os << "verdict,CounterExample," << fmt(curve[verdict.i].t) << ',' << fmt(curve[verdict.j].t) << '\n';
  }
  return verdict.increasing ? kOk : kRefused;
}

int cmd_sample(const json& cfg) {
  const auto law = make_law(cfg);
  const double nd = cfg.contains("n") ? as_double(cfg["n"], "n") : 1000.0;
  if (!(nd >= 1) || nd != std::floor(nd)) input_error("n must be a positive integer");
  const auto n = static_cast<std::size_t>(nd);
  const auto seed = cfg.value("seed", dinv_default_seed());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto threads = cfg.value("threads", hw);
  if (threads == 0) input_error("threads must be >= 1");
  std::vector<double> ys(n);
  check(dinv_law_sample(law.get(), seed, 0, n, threads, ys.data()));
  dinv_law_check r{};
  check(dinv_law_check_samples(law.get(), ys.data(), n, tolerances(cfg).ks_alpha, &r));
  Output out(cfg);
  auto& os = out.os();
  if (want_json(cfg)) {
    json j{{"samples", json::array()}};
    for (double y : ys) j["samples"].push_back(jnum(y));
    j["summary"] = {{"ks", jnum(r.ks)}, {"critical", jnum(r.critical)}, {"finite", r.finite},
                    {"defect_fraction", jnum(r.defect_fraction)},
                    {"defect_mass", jnum(r.defect_expected)},
                    {"ks_pass", r.ks_pass != 0}, {"defect_within", r.defect_within != 0},
                    {"pass", r.pass != 0}};
    os << j.dump() << '\n';
  } else {
    os << "y\n";
    for (double y : ys) os << fmt(y) << '\n';
    os << "\nks," << fmt(r.ks) << "\ncritical," << fmt(r.critical) << "\nfinite," << r.finite
       << "\ndefect_fraction," << fmt(r.defect_fraction) << "\ndefect_mass,"
       << fmt(r.defect_expected) << "\nresult," << (r.ks_pass ? "PASS" : "FAIL") << '\n';
  }
  return kOk;
}

const std::set<std::string> kCommon = {"command", "format", "out", "tol"};
const std::set<std::string> kDriftOpts = {"zero", "constant", "power", "explosion", "exppower", "csv", "linear"};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"check-drift", {}},
    {"table", {"x", "t", "u"}},
    {"classify", {"phi1", "phi2", "phi_csv", "lambda", "t"}},
    {"price", {"s0", "sigma", "mu", "strike", "t", "seed", "paths"}},
    {"sample", {"x", "n", "seed", "threads"}},
};

void validate_keys(const json& cfg, const std::string& cmd) {
  const auto& extra = kCommandKeys.at(cmd);
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const auto& k = it.key();
    const bool drift_ok = cmd != "price" && kDriftOpts.count(k);
    if (!kCommon.count(k) && !drift_ok && !extra.count(k))
      input_error("option '" + k + "' is not used by " + cmd);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"d-inverses of Brownian motion with drift"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config; command-line flags win");

  // Every flag lives on the top level so it may follow the subcommand.
  json flags = json::object();
  std::map<std::string, std::vector<std::string>> kv;
  std::map<std::string, std::string> str;
  bool zero = false, linear = false;
  double x = 0, s0 = 0, sigma = 0, mu = 0, strike = 0;
  std::uint64_t seed = 0, n = 0, paths = 0;
  unsigned threads = 0;

  app.add_flag("--zero", zero, "zero drift");
  for (const char* k : {"constant", "power", "explosion", "exppower", "phi1", "phi2", "tol"})
    app.add_option(std::string("--") + k, kv[k], "key=value parameters")->expected(1, -1);
  const std::pair<const char*, const char*> text_opts[] = {
      {"csv", "tabulated drift, columns t,rho"},
      {"phi-csv", "tabulated scalings, columns lambda,phi1,phi2"},
      {"t", "time grid: a,b,c | log:lo:hi:n | lin:lo:hi:n"},
      {"u", "probability grid for quantiles"},
      {"lambda", "lambda grid for classify"},
      {"out", "write output to this file"},
      {"format", "csv or json"}};
  for (const auto& [k, help] : text_opts) app.add_option(std::string("--") + k, str[k], help);
  app.add_flag("--linear", linear, "linear interpolation for --csv");
  app.add_option("--x", x, "level x");
  app.add_option("--n", n, "number of draws");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--s0", s0, "initial price");
  app.add_option("--sigma", sigma, "volatility");
  app.add_option("--mu", mu, "drift rate");
  app.add_option("--strike", strike, "strike K");
  app.add_option("--paths", paths, "Monte Carlo paths");

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("check-drift", "check that rho(t)/sqrt(t) is non-decreasing"));
  subs.push_back(app.add_subcommand("table", "CDF and quantile table of the d-inverse"));
  subs.push_back(app.add_subcommand("classify", "classify the scaling limit of a family"));
  subs.push_back(app.add_subcommand("price", "call prices C(t) and their monotonicity"));
  subs.push_back(app.add_subcommand("sample", "draw from the d-inverse with a KS summary"));
  for (auto* s : subs) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) input_error("cannot open config " + config_path);
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        input_error(std::string("config is not valid JSON: ") + e.what());
      }
      if (!cfg.is_object()) input_error("config must be a JSON object");
    }

    auto given = [&](const char* name) { return app.count(std::string("--") + name) > 0; };
    if (given("zero")) cfg["zero"] = zero;
    if (given("linear")) cfg["linear"] = linear;
    for (const auto& [k, v] : kv)
      if (given(k.c_str())) cfg[k] = parse_kv(v, k);
    for (const auto& [k, v] : str)
      if (given(k.c_str())) cfg[k == "phi-csv" ? "phi_csv" : k] = v;
    if (given("x")) cfg["x"] = x;
    if (given("n")) cfg["n"] = n;
    if (given("seed")) cfg["seed"] = seed;
    if (given("threads")) cfg["threads"] = threads;
    if (given("s0")) cfg["s0"] = s0;
    if (given("sigma")) cfg["sigma"] = sigma;
    if (given("mu")) cfg["mu"] = mu;
    if (given("strike")) cfg["strike"] = strike;
    if (given("paths")) cfg["paths"] = paths;

    std::string cmd;
    for (auto* s : subs)
      if (s->parsed()) cmd = s->get_name();
    if (cmd.empty()) {
      if (!cfg.contains("command")) input_error("no command given; see --help");
      cmd = cfg["command"].get<std::string>();
    }
    cfg["command"] = cmd;
    if (!kCommandKeys.count(cmd)) input_error("unknown command '" + cmd + "'");
    validate_keys(cfg, cmd);

    if (cmd == "check-drift") return cmd_check_drift(cfg);
    if (cmd == "table") return cmd_table(cfg);
    if (cmd == "classify") return cmd_classify(cfg);
    if (cmd == "price") return cmd_price(cfg);
    return cmd_sample(cfg);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: bad config value: " << e.what() << '\n';
    return kInput;
  }
}
