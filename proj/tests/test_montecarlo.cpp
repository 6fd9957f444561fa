#include "dinv/errors.hpp"
#include "dinv/montecarlo.hpp"
#include "dinv/numerics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace dinv;

TEST_CASE("EmpiricalLaw splits finite and infinite samples") {
  const std::vector<double> xs{3.0, kInf, 1.0, 2.0, kInf};
  const EmpiricalLaw e(xs);
  CHECK(e.finite_count() == 3);
  CHECK(e.infinite_count() == 2);
  CHECK(e.finite()[0] == 1.0);
  CHECK(e.defect_fraction() == doctest::Approx(0.4));
  const std::vector<double> bad{1.0, std::nan("")};
  CHECK_THROWS_AS(EmpiricalLaw{bad}, EvaluationError);
}

TEST_CASE("sample_drifted_terminal") {
  SeededStream rng(5);
  const double z0 = SeededStream(5).normal_at(0);
  CHECK(sample_drifted_terminal(DriftFunction::zero(), 1.0, rng) == z0);
  SeededStream rng2(5);
  CHECK(sample_drifted_terminal(DriftFunction::constant(1.0), 4.0, rng2) == doctest::Approx(2 * z0 + 4));

  SeededStream big(9);
  double sum = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += sample_drifted_terminal(DriftFunction::zero(), 1.0, big);
  CHECK(std::abs(sum / n) < 3 / std::sqrt(double(n)));
}

TEST_CASE("KS critical values") {
  // Asymptotic formula sqrt(-ln(alpha/2)/2) against the exact Kolmogorov quantile.
  CHECK(std::abs(ks_critical_one_sample(1) - oracle::kKolmogorov99) < 1e-6);
  CHECK(ks_critical_one_sample(100000) == doctest::Approx(oracle::kKolmogorov99 / std::sqrt(1e5)).epsilon(1e-6));
  CHECK(ks_critical_two_sample(100000, 100000) ==
        doctest::Approx(oracle::kKolmogorov99 * std::sqrt(2e-5)).epsilon(1e-6));
}

TEST_CASE("one-sample KS on stratified quantiles") {
  const int n = 1000;
  std::vector<double> xs;
  for (int k = 1; k <= n; ++k) xs.push_back(normal_quantile((k - 0.5) / n));
  const EmpiricalLaw e(xs);
  CHECK(ks_one_sample(e, [](double z) { return normal_cdf(z); }) <= 0.5 / n + 1e-12);
}

TEST_CASE("one-sample KS on the analytic law and a shifted law") {
  SeededStream rng(3);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = rng.normal();
  const EmpiricalLaw e(xs);
  CHECK(ks_one_sample(e, [](double z) { return normal_cdf(z); }) < ks_critical_one_sample(xs.size()));
  for (auto& x : xs) x += 1.0;
  const EmpiricalLaw shifted(xs);
  const double gap = normal_cdf(0.5) - normal_cdf(-0.5);  // largest CDF gap of a unit shift
  CHECK(ks_one_sample(shifted, [](double z) { return normal_cdf(z); }) >= gap - ks_critical_one_sample(xs.size()));
}

TEST_CASE("one-sample KS rejects an all-infinite sample") {
  const std::vector<double> xs{kInf, kInf};
  CHECK_THROWS_AS(ks_one_sample(EmpiricalLaw(xs), [](double) { return 0.0; }, 0.5), DomainError);
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{1, 2, 3}, b{10, 11};
  CHECK(ks_two_sample(EmpiricalLaw(a), EmpiricalLaw(a)) == 0.0);
  CHECK(ks_two_sample(EmpiricalLaw(a), EmpiricalLaw(b)) == 1.0);

  SeededStream r1(1), r2(2);
  std::vector<double> x(100000), y(100000);
  for (auto& v : x) v = r1.normal();
  for (auto& v : y) v = r2.normal();
  CHECK(ks_two_sample(EmpiricalLaw(x), EmpiricalLaw(y)) < ks_critical_two_sample(x.size(), y.size()));
}

TEST_CASE("crossing_check") {
  SeededStream rng(17);
  auto r = crossing_check(DriftFunction::zero(), 0.0, 3.0, 20000, rng);
  CHECK(r.analytic == 0.5);
  CHECK(r.within);
  r = crossing_check(DriftFunction::constant(1.0), 1.0, 1.0, 20000, rng);
  CHECK(r.analytic == 0.5);
  CHECK(r.within);
  r = crossing_check(DriftFunction::power(1.0, 2.0), 0.0, 2.0, 20000, rng);
  CHECK(std::abs(r.analytic - oracle::kN2Sqrt2) < 1e-14);
  CHECK(r.within);
  CHECK_THROWS_AS(crossing_check(DriftFunction::zero(), 0.0, 1.0, 100, rng), DomainError);
}

TEST_CASE("defect_check band") {
  std::vector<double> xs(1000, 1.0);
  for (int i = 0; i < 500; ++i) xs[i] = kInf;
  const auto d = defect_check(EmpiricalLaw(xs), 0.5);
  CHECK(d.fraction == 0.5);
  CHECK(d.within);
  CHECK_FALSE(defect_check(EmpiricalLaw(xs), 0.1).within);
}
