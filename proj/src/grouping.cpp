// SPDX-License-Identifier: Apache-2.0
#include "groupcast/grouping.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "groupcast/errors.hpp"

namespace groupcast {

Grouping Grouping::canonical() const {
  Grouping out = *this;
  std::sort(out.groups.begin(), out.groups.end(), [](const UserGroup& a, const UserGroup& b) {
    return a.front() < b.front();
  });
  return out;
}

Grouping Grouping::from_one_based(const std::vector<std::vector<std::size_t>>& groups) {
  Grouping out;
  for (const auto& grp : groups) {
    UserGroup g;
    for (std::size_t u : grp) {
      if (u == 0) throw InvalidGrouping("user indices are one-based");
      g.push_back(u - 1);
    }
    out.n_users += g.size();
    out.groups.push_back(std::move(g));
  }
  out.group_size = groups.empty() ? 0 : groups.front().size();
  return out;
}

Grouping Grouping::singletons(std::size_t n_users) {
  Grouping out{{}, n_users, 1};
  for (std::size_t u = 0; u < n_users; ++u) out.groups.push_back({u});
  return out;
}

Grouping Grouping::single_group(std::size_t n_users) {
  UserGroup all(n_users);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Grouping{{std::move(all)}, n_users, n_users};
}

std::string Grouping::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& grp : groups) {
    nlohmann::json g = nlohmann::json::array();
    for (std::size_t u : grp) g.push_back(u + 1);
    arr.push_back(std::move(g));
  }
  return arr.dump();
}

bool same_grouping(const Grouping& a, const Grouping& b) {
  if (a.n_users != b.n_users || a.group_size != b.group_size) return false;
  return a.canonical().groups == b.canonical().groups;
}

void validate(const Grouping& grouping) {
  const std::size_t n = grouping.n_users;
  const std::size_t g = grouping.group_size;
  if (n == 0 || g == 0) throw InvalidGrouping("empty grouping");
  if (n % g != 0) throw InvalidGrouping("group size does not divide the number of users");
  if (grouping.groups.size() != n / g) throw InvalidGrouping("wrong number of groups");
  std::vector<bool> seen(n, false);
  for (const auto& grp : grouping.groups) {
    if (grp.size() != g) throw InvalidGrouping("group of wrong size");
    for (std::size_t u : grp) {
      if (u >= n) throw InvalidGrouping("user index out of range");
      if (seen[u]) throw InvalidGrouping("user " + std::to_string(u + 1) + " appears twice");
      seen[u] = true;
    }
  }
  // n/g groups of g distinct in-range users cover every user.
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

void check_shape(std::size_t n, std::size_t g) {
  if (n == 0 || g == 0 || n % g != 0) {
    throw InvalidGrouping("group size " + std::to_string(g) + " does not divide " +
                          std::to_string(n) + " users");
  }
}

struct Enumerator {
  std::size_t g;
  const std::function<bool(const Grouping&)>& visit;
  Grouping current;
  bool stopped = false;

  // `remaining` is kept sorted ascending.
  void recurse(const std::vector<std::size_t>& remaining) {
    if (stopped) return;
    if (remaining.empty()) {
      if (!visit(current)) stopped = true;
      return;
    }
    const std::size_t anchor = remaining.front();
    const std::size_t pool = remaining.size() - 1;
    // Ascending (g-1)-combinations of the other remaining users.
    std::vector<std::size_t> pick(g - 1);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    for (;;) {
      UserGroup members{anchor};
      std::vector<bool> used(remaining.size(), false);
      used[0] = true;
      for (std::size_t p : pick) {
        members.push_back(remaining[p + 1]);
        used[p + 1] = true;
      }
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < remaining.size(); ++i)
        if (!used[i]) rest.push_back(remaining[i]);

      std::sort(members.begin(), members.end());
      do {
        current.groups.push_back(members);
        recurse(rest);
        current.groups.pop_back();
        if (stopped) return;
      } while (std::next_permutation(members.begin(), members.end()));

      // Advance the combination.
      std::size_t k = g - 1;
      while (k > 0 && pick[k - 1] == pool - (g - 1) + (k - 1)) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t j = k; j < g - 1; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
};

}  // namespace

std::uint64_t grouping_count(std::size_t n_users, std::size_t group_size) {
  check_shape(n_users, group_size);
  // n! / (n/g)! = product of (n/g + 1) .. n
  std::uint64_t c = 1;
  for (std::size_t k = n_users / group_size + 1; k <= n_users; ++k) c = sat_mul(c, k);
  return c;
}

std::uint64_t ordered_subset_count(std::size_t n_users, std::size_t group_size) {
  if (group_size > n_users) return 0;
  std::uint64_t c = 1;
  for (std::size_t k = n_users - group_size + 1; k <= n_users; ++k) c = sat_mul(c, k);
  return c;
}

void for_each_grouping(std::size_t n_users, std::size_t group_size, std::uint64_t budget,
                       const std::function<bool(const Grouping&)>& visit) {
  const std::uint64_t count = grouping_count(n_users, group_size);
  if (count > budget) {
    throw BudgetExceeded(std::to_string(count) + " groupings exceed budget " +
                         std::to_string(budget));
  }
  Enumerator e{group_size, visit, Grouping{{}, n_users, group_size}};
  std::vector<std::size_t> all(n_users);
  std::iota(all.begin(), all.end(), std::size_t{0});
  e.recurse(all);
}

std::vector<Grouping> enumerate_groupings(std::size_t n_users, std::size_t group_size,
                                          std::uint64_t budget) {
  std::vector<Grouping> out;
  for_each_grouping(n_users, group_size, budget, [&out](const Grouping& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

Grouping random_grouping(std::size_t n_users, std::size_t group_size, RngSeed seed) {
  check_shape(n_users, group_size);
  std::vector<std::size_t> perm(n_users);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  StreamRng rng(seed);
  for (std::size_t i = n_users; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  Grouping out{{}, n_users, group_size};
  for (std::size_t k = 0; k < n_users; k += group_size) {
    out.groups.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(k),
                            perm.begin() + static_cast<std::ptrdiff_t>(k + group_size));
  }
  return out;
}

}  // namespace groupcast
