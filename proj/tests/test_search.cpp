// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "groupcast/channel.hpp"
#include "groupcast/errors.hpp"
#include "groupcast/precoder.hpp"
#include "groupcast/search.hpp"
#include "oracles.hpp"

using namespace groupcast;

namespace {

std::vector<double> zf_powers(const ChannelMatrix& h, double total) {
  return waterfill(zf_gains(h), total).powers;
}

const Grouping kAppendixGrouping = Grouping::from_one_based({{2, 5}, {3, 1}, {4, 6}});

}  // namespace

TEST_CASE("ordered-pair rate table of the built-in channel") {
  const auto h = builtin_hex();
  const auto p = zf_powers(h, fixtures::db(29.0));
  const auto table = rate_table(h, p, 2);
  CHECK(table.size() == 30);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (i != j) CHECK(std::abs(table.at({i, j}) - fixtures::kPairRates[i][j]) <= 0.05);
  CHECK(std::abs(table.at({0, 4}) - fixtures::kPairRate15) <= 0.02);

  const auto qr = rate_table(h, p, 2, GainPath::kQr);
  for (const auto& [k, v] : table) CHECK(v == doctest::Approx(qr.at(k)).epsilon(1e-9));
}

TEST_CASE("rate table size is the ordered subset count") {
  const auto h = rayleigh(6, 6, {5, 0});
  const std::vector<double> p(6, 1.0);
  CHECK(rate_table(h, p, 1).size() == 6);
  CHECK(rate_table(h, p, 3).size() == 120);
  CHECK(rate_table(h, p, 4).size() == 360);
}

TEST_CASE("gain table lookup") {
  const auto h = rayleigh(5, 5, {1, 0});
  const GainTable t(h, 2);
  const std::size_t s[] = {3, 1};
  const auto i = t.index_of(s);
  CHECK(t.users(i)[0] == 3);
  CHECK(t.users(i)[1] == 1);
  CHECK(t.gains(i)[1] == doctest::Approx(oracle::grouped_gain(h, {3, 1}, 1)).epsilon(1e-10));
  const std::size_t bad[] = {2, 2};
  CHECK_THROWS_AS(t.index_of(bad), InvalidGrouping);
}

TEST_CASE("greedy grouping of the built-in channel at 29 dB") {
  const auto h = builtin_hex();
  const double total = fixtures::db(29.0);
  const auto g = guga(h, total, zf_powers(h, total), 2);
  CHECK(g.groups == kAppendixGrouping.groups);
  CHECK_THROWS_AS(guga(h, total + 1.0, zf_powers(h, total), 2), PowerMismatch);
}

TEST_CASE("greedy grouping on orthogonal channels picks the lexicographic first pairs") {
  const ChannelMatrix h(CMatrix::identity(4));
  const auto g = guga(h, 4.0, std::vector<double>(4, 1.0), 2);
  CHECK(g.groups == Grouping::from_one_based({{1, 2}, {3, 4}}).groups);
}

TEST_CASE("brute force agrees with the exhaustive oracle") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto h = rayleigh(4, 4, {s, 21});
    const double total = 10.0;
    const auto res = brute_force_optimal(h, total, 2);
    double best = 0.0;
    for (const auto& groups : oracle::all_groupings(4, 2))
      best = std::max(best, oracle::grouping_rate(h, groups, total));
    CHECK(res.sum_rate == doctest::Approx(best).epsilon(1e-9));
    CHECK(res.iterations == 12);
    CHECK(res.rate_trace.back() == res.sum_rate);
    CHECK(sum_rate_opt_power(h, total, res.grouping).sum_rate == doctest::Approx(res.sum_rate));

    const auto gg = guga(h, total, zf_powers(h, total), 2);
    CHECK(sum_rate_opt_power(h, total, gg).sum_rate <= res.sum_rate + 1e-9);
  }
}

TEST_CASE("brute force on orthogonal channels equals zero forcing") {
  const ChannelMatrix h(CMatrix::identity(4));
  for (std::size_t g : {1, 2, 4})
    CHECK(brute_force_optimal(h, 3.0, g).sum_rate == doctest::Approx(zf_sum_rate(h, 3.0).sum_rate));
}

TEST_CASE("brute force budget guard") {
  CHECK_THROWS_AS(brute_force_optimal(rayleigh(12, 12, {1, 0}), 10.0, 2), BudgetExceeded);
  CHECK_THROWS_AS(brute_force_optimal(rayleigh(6, 6, {1, 0}), 10.0, 2, 100), BudgetExceeded);
}

TEST_CASE("jpauga first iteration reproduces the greedy example") {
  const auto h = builtin_hex();
  const auto res = jpauga(h, fixtures::db(29.0), 2, {1, 1e-4});
  CHECK(res.grouping.groups == kAppendixGrouping.groups);
  CHECK(res.iterations == 1);
}

TEST_CASE("jpauga converges immediately on orthogonal channels") {
  const ChannelMatrix h(CMatrix::identity(4));
  const auto res = jpauga(h, 4.0, 2);
  CHECK(res.iterations == 1);
  CHECK(res.sum_rate == doctest::Approx(zf_sum_rate(h, 4.0).sum_rate));
}

TEST_CASE("jpauga monotonicity and sandwich") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto h = rayleigh(6, 6, {s, 0});
    const double total = 10.0;
    const auto table = GainTable(h, 2);
    const auto one = jpauga(h, table, total, {1, 1e-4});
    const auto five = jpauga(h, table, total, {5, 1e-4});
    const auto best = brute_force_optimal(table, total);
    const double c_zf = zf_sum_rate(h, total).sum_rate;
    for (std::size_t i = 1; i < five.rate_trace.size(); ++i)
      CHECK(five.rate_trace[i] >= five.rate_trace[i - 1] - 1e-9);
    CHECK(five.sum_rate >= one.sum_rate - 1e-9);
    CHECK(five.sum_rate <= best.sum_rate + 1e-9);
    CHECK(one.sum_rate >= c_zf - 1e-9);
    CHECK(five.sum_rate == five.rate_trace.back());
  }
}

TEST_CASE("jpauga rejects bad options") {
  const auto h = rayleigh(4, 4, {1, 0});
  CHECK_THROWS_AS(jpauga(h, 1.0, 2, {0, 1e-4}), ConfigError);
  CHECK_THROWS_AS(jpauga(h, 1.0, 3), InvalidGrouping);
}

TEST_CASE("brute force on the built-in channel at 10 dB") {
  CHECK(std::abs(brute_force_optimal(builtin_hex(), fixtures::db(10.0), 2).sum_rate - 4.75) <= 0.05);
}
