// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <set>

#include "groupcast/errors.hpp"
#include "groupcast/grouping.hpp"
#include "oracles.hpp"

using namespace groupcast;

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(Grouping::from_one_based({{1, 4}, {2, 3}})));
  CHECK_NOTHROW(validate(Grouping::from_one_based({{1, 2, 3}})));
  CHECK_THROWS_AS(validate(Grouping::from_one_based({{1, 1}, {2, 3}})), InvalidGrouping);
  Grouping short_group = Grouping::from_one_based({{1, 2}, {3, 4}});
  short_group.groups[1].pop_back();
  CHECK_THROWS_AS(validate(short_group), InvalidGrouping);
}

TEST_CASE("grouping counts") {
  CHECK(grouping_count(4, 2) == 12);
  CHECK(grouping_count(6, 2) == 120);
  CHECK(grouping_count(12, 2) == 665280);
  CHECK(grouping_count(6, 6) == 720);
  CHECK(ordered_subset_count(6, 2) == 30);
  CHECK(ordered_subset_count(12, 3) == 1320);
  for (std::size_t n = 2; n <= 12; n += 2) {
    std::uint64_t odd = 1;
    for (std::size_t k = 1; k < n; k += 2) odd *= k;
    CHECK(grouping_count(n, 2) == (std::uint64_t{1} << (n / 2)) * odd);
  }
}

TEST_CASE("enumeration matches the permutation oracle") {
  for (auto [n, g] : {std::pair<std::size_t, std::size_t>{4, 2}, {6, 2}, {6, 3}, {4, 4}, {6, 1}}) {
    const auto all = enumerate_groupings(n, g, kDefaultEnumerationBudget);
    CHECK(all.size() == grouping_count(n, g));
    std::set<std::vector<std::vector<std::size_t>>> got;
    for (const auto& grp : all) {
      CHECK_NOTHROW(validate(grp));
      auto groups = grp.groups;
      std::sort(groups.begin(), groups.end());
      got.insert(groups);
    }
    const auto want = oracle::all_groupings(n, g);
    CHECK(got == std::set<std::vector<std::vector<std::size_t>>>(want.begin(), want.end()));
  }
}

TEST_CASE("enumeration is deterministic and respects the budget") {
  const auto a = enumerate_groupings(6, 2, 1000);
  const auto b = enumerate_groupings(6, 2, 1000);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].groups == b[i].groups);
  CHECK_THROWS_AS(enumerate_groupings(12, 2, kDefaultEnumerationBudget), BudgetExceeded);
}

TEST_CASE("random grouping is uniform over A_4") {
  std::map<std::vector<std::vector<std::size_t>>, int> freq;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto g = random_grouping(4, 2, {77, static_cast<std::uint64_t>(i)});
    auto groups = g.groups;
    std::sort(groups.begin(), groups.end());
    freq[groups]++;
  }
  CHECK(freq.size() == 12);
  for (const auto& [k, c] : freq) CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 12) < 0.01);
  CHECK(random_grouping(6, 3, {1, 2}).groups == random_grouping(6, 3, {1, 2}).groups);
  const auto two = random_grouping(2, 2, {3, 0});
  CHECK_NOTHROW(validate(two));
}

TEST_CASE("canonical form keeps intra-group order") {
  const auto g = Grouping::from_one_based({{3, 1}, {2, 4}});
  const auto c = g.canonical();
  CHECK(c.groups[0] == UserGroup{1, 3});
  CHECK(c.groups[1] == UserGroup{2, 0});
  CHECK(same_grouping(g, Grouping::from_one_based({{2, 4}, {3, 1}})));
  CHECK_FALSE(same_grouping(g, Grouping::from_one_based({{1, 3}, {2, 4}})));
  CHECK(g.to_json() == "[[3,1],[2,4]]");
}
