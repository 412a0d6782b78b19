// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "groupcast/analysis.hpp"
#include "groupcast/errors.hpp"
#include "oracles.hpp"

using namespace groupcast;

TEST_CASE("E1 against quadrature") {
  CHECK(std::abs(exp_integral_e1(1.0) - 0.2193839344) < 1e-9);
  for (double z : {1e-6, 1e-3, 0.1, 0.5, 0.999, 1.0, 1.001, 2.0, 5.0, 10.0, 30.0, 50.0}) {
    const double ref = oracle::e1_quadrature(z);
    CHECK(std::abs(exp_integral_e1(z) - ref) <= 1e-10 * ref);
    CHECK(exp_integral_e1_scaled(z) == doctest::Approx(std::exp(z) * ref).epsilon(1e-10));
  }
  CHECK(exp_integral_e1(50.0) < 1e-23);
  CHECK(exp_integral_e1_scaled(1e4) == doctest::Approx(1.0 / 1e4).epsilon(1e-3));
}

TEST_CASE("E1 logarithmic bracket") {
  for (double z : {0.1, 1.0, 10.0}) {
    const double s = exp_integral_e1_scaled(z);
    CHECK(0.5 * std::log(1.0 + 2.0 / z) < s);
    CHECK(s < std::log(1.0 + 1.0 / z));
  }
}

TEST_CASE("E1 domain") {
  CHECK_THROWS_AS(exp_integral_e1(0.0), DomainError);
  CHECK_THROWS_AS(exp_integral_e1(-1.0), DomainError);
  CHECK_THROWS_AS(exp_integral_e1_scaled(0.0), DomainError);
}

TEST_CASE("gap closed form and bounds") {
  for (double ratio : {0.1, 1.0, 10.0, 100.0}) {
    const auto r = gap_closed_form(6.0 * ratio, 6);
    CHECK(r.lower_bound < r.closed_form);
    CHECK(r.closed_form < r.upper_bound);
  }
  const auto one = gap_closed_form(1.0, 6);
  CHECK(one.lower_bound > 0.0);
  CHECK(one.closed_form > 0.0);
  const auto big = gap_closed_form(6e8, 6);
  const double limit = 3.0 * std::numbers::log2e;
  CHECK(limit == doctest::Approx(4.328).epsilon(1e-3));
  CHECK(big.lower_bound == doctest::Approx(limit).epsilon(1e-6));
  CHECK(big.upper_bound == doctest::Approx(limit).epsilon(1e-6));
  const auto ten = gap_closed_form(10.0, 6);
  CHECK(ten.lower_bound < ten.closed_form);
  CHECK(ten.closed_form < ten.upper_bound);
  CHECK_THROWS_AS(gap_closed_form(1.0, 5), DomainError);
  CHECK_THROWS_AS(gap_closed_form(0.0, 6), DomainError);
}

TEST_CASE("Monte Carlo gap") {
  const auto cf = gap_closed_form(100.0, 6);
  const auto mc = monte_carlo_gap(6, 100.0, 10000, 17);
  CHECK(std::abs(mc.mean - cf.closed_form) < 3.0 * mc.std_error);

  const auto a = monte_carlo_gap(6, 10.0, 1, 3);
  const auto b = monte_carlo_gap(6, 10.0, 1, 3);
  CHECK(a.mean == b.mean);

  const auto hi = monte_carlo_gap(6, 1e4, 10000, 5);
  const auto hb = gap_closed_form(1e4, 6);
  CHECK(hi.mean > hb.lower_bound - 3.0 * hi.std_error);
  CHECK(hi.mean < hb.upper_bound + 3.0 * hi.std_error);
}

TEST_CASE("asymptotic power gap") {
  CHECK(snr_gap_db(6) == doctest::Approx(2.171).epsilon(0.0005));
  CHECK(snr_gap_db(6) == snr_gap_db(12));
  CHECK(std::pow(10.0, snr_gap_db(6) / 10.0) == doctest::Approx(1.6487).epsilon(1e-4));
}

TEST_CASE("critical rate") {
  const std::vector<double> c(20000, 3.5);
  CHECK(critical_rate(c, 1e-3) == 3.5);
  CHECK(critical_rate(c, 0.5) == 3.5);
  std::vector<double> ramp(10000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[ramp.size() - 1 - i] = static_cast<double>(i);
  CHECK(critical_rate(ramp, 1e-3) == 9.0);  // floor(1e-3 * 9999) = 9
  CHECK_THROWS_AS(critical_rate(std::vector<double>(100, 1.0), 1e-3), TooFewSamples);
  CHECK_THROWS_AS(critical_rate(c, 0.0), DomainError);
}

TEST_CASE("rate distribution bookkeeping") {
  const auto zf = rate_distribution(Scheme::kZf, 6, 6, 10.0, 2, 200, 99);
  const auto jp = rate_distribution(Scheme::kJpauga, 6, 6, 10.0, 2, 200, 99, {{1, 1e-4}, kDefaultEnumerationBudget});
  const auto bf = rate_distribution(Scheme::kBrute, 6, 6, 10.0, 2, 200, 99);
  const auto dp = rate_distribution(Scheme::kZfdp, 6, 6, 10.0, 2, 200, 99);
  const auto rnd = rate_distribution(Scheme::kRandom, 6, 6, 10.0, 2, 200, 99);
  REQUIRE(zf.samples.size() == 200);
  CHECK(zf.fingerprints == jp.fingerprints);
  CHECK(zf.fingerprints == dp.fingerprints);
  CHECK(jp.scheme == "jpauga(max_itr=1,rel_threshold=0.0001)");
  CHECK(dp.g == 6);
  for (std::size_t t = 0; t < 200; ++t) {
    CHECK(zf.samples[t] >= 0.0);
    CHECK(jp.samples[t] >= zf.samples[t] - 1e-9);
    CHECK(rnd.samples[t] >= zf.samples[t] - 1e-9);
    CHECK(bf.samples[t] >= jp.samples[t] - 1e-9);
    CHECK(dp.samples[t] >= bf.samples[t] - 1e-9);
  }
  CHECK_THROWS_AS(rate_distribution(Scheme::kBrute, 12, 12, 10.0, 2, 1, 1), BudgetExceeded);
}

TEST_CASE("rate distribution is independent of the worker count") {
  const auto a = rate_distribution(Scheme::kJpauga, 6, 6, 10.0, 2, 300, 5, {}, 1);
  const auto b = rate_distribution(Scheme::kJpauga, 6, 6, 10.0, 2, 300, 5, {}, 8);
  CHECK(a.samples == b.samples);
  CHECK(monte_carlo_gap(6, 10.0, 300, 5, 1).mean == monte_carlo_gap(6, 10.0, 300, 5, 8).mean);
}

TEST_CASE("summary statistics") {
  std::vector<double> x;
  for (int i = 0; i < 10000; ++i) x.push_back(static_cast<double>(i % 10));
  const auto s = summarize(x, 5.0);
  CHECK(s.n == 10000);
  CHECK(s.mean == doctest::Approx(4.5));
  CHECK(s.prob_below == doctest::Approx(0.5));
  CHECK(s.min == 0.0);
  CHECK(s.max == 9.0);
  REQUIRE(s.critical_rate_1e3.has_value());
  CHECK(*s.critical_rate_1e3 == 0.0);
  std::size_t total = 0;
  for (auto c : s.histogram.counts) total += c;
  CHECK(s.histogram.counts.size() == 100);
  CHECK(total == 10000);
  CHECK_FALSE(summarize(std::vector<double>(10, 1.0)).critical_rate_1e3.has_value());
}

TEST_CASE("random pairing of the built-in channel averaged over all groupings") {
  const auto h = builtin_hex();
  double sum = 0.0;
  const auto all = oracle::all_groupings(6, 2);
  for (const auto& g : all) sum += oracle::grouping_rate(h, g, std::pow(10.0, 1.0));
  CHECK(std::abs(sum / static_cast<double>(all.size()) - 3.0) <= 0.3);
}
