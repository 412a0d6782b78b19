// SPDX-License-Identifier: Apache-2.0
#include "groupcast/search.hpp"

#include <cmath>
#include <string>

#include "groupcast/errors.hpp"
#include "groupcast/precoder.hpp"

namespace groupcast {

namespace {

void check_group_size(std::size_t n_users, std::size_t g) {
  if (g == 0 || g > n_users) {
    throw InvalidGrouping("group size " + std::to_string(g) + " out of range for " +
                          std::to_string(n_users) + " users");
  }
}

void check_divides(std::size_t n_users, std::size_t g) {
  check_group_size(n_users, g);
  if (n_users % g != 0) {
    throw InvalidGrouping("group size " + std::to_string(g) + " does not divide " +
                          std::to_string(n_users));
  }
}

void check_powers(std::span<const double> powers, std::size_t n_users) {
  if (powers.size() != n_users) throw PowerMismatch("power vector length differs from N_u");
  for (double p : powers)
    if (!(p >= 0.0)) throw PowerMismatch("negative power");
}

// Visits every ordered g-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_ordered_subset(std::size_t n, std::size_t g, Visit&& visit) {
  std::vector<std::size_t> cur;
  std::vector<bool> used(n, false);
  cur.reserve(g);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == g) {
      visit(std::span<const std::size_t>(cur));
      return;
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (used[u]) continue;
      used[u] = true;
      cur.push_back(u);
      self(self);
      cur.pop_back();
      used[u] = false;
    }
  };
  rec(rec);
}

double rate_of(const Grouping& grouping, std::span<const double> gains,
               std::span<const double> powers) {
  double s = 0.0;
  for (const auto& grp : grouping.groups)
    for (std::size_t u : grp) s += std::log2(1.0 + powers[u] * gains[u]);
  return s;
}

}  // namespace

GainTable::GainTable(const ChannelMatrix& h, std::size_t group_size, GainPath path)
    : n_users_(h.n_users()), group_size_(group_size) {
  check_group_size(n_users_, group_size_);
  if (path == GainPath::kFast) {
    const GramInverseCache cache(h);
    build(h, &cache, path);
  } else {
    build(h, nullptr, path);
  }
}

GainTable::GainTable(const ChannelMatrix& h, const GramInverseCache& cache, std::size_t group_size)
    : n_users_(h.n_users()), group_size_(group_size) {
  check_group_size(n_users_, group_size_);
  cache.check_source(h);
  build(h, &cache, GainPath::kFast);
}

void GainTable::build(const ChannelMatrix& h, const GramInverseCache* cache, GainPath path) {
  const std::size_t g = group_size_;
  n_entries_ = static_cast<std::size_t>(ordered_subset_count(n_users_, g));
  users_.reserve(n_entries_ * g);
  gains_.reserve(n_entries_ * g);
  lookup_.reserve(n_entries_);

  std::vector<double> buf(g);
  std::size_t i = 0;
  for_each_ordered_subset(n_users_, g, [&](std::span<const std::size_t> s) {
    if (path == GainPath::kFast) {
      try {
        effective_gains_fast(*cache, s, buf);
      } catch (const NotPositiveDefinite& e) {
        throw RankDeficient(std::string("group block is singular: ") + e.what());
      }
    } else {
      const CMatrix r = effective_channel(h, s).r;
      for (std::size_t j = 0; j < g; ++j) buf[j] = std::norm(r(j, j));
    }
    users_.insert(users_.end(), s.begin(), s.end());
    gains_.insert(gains_.end(), buf.begin(), buf.end());
    lookup_.emplace(code_of(s), i++);
  });
}

std::uint64_t GainTable::code_of(std::span<const std::size_t> users) const {
  std::uint64_t c = 0;
  for (std::size_t u : users) c = c * n_users_ + u;
  return c;
}

std::span<const std::size_t> GainTable::users(std::size_t i) const {
  return {users_.data() + i * group_size_, group_size_};
}

std::span<const double> GainTable::gains(std::size_t i) const {
  return {gains_.data() + i * group_size_, group_size_};
}

std::size_t GainTable::index_of(std::span<const std::size_t> users) const {
  if (users.size() != group_size_) throw InvalidGrouping("subset has the wrong size");
  for (std::size_t u : users)
    if (u >= n_users_) throw InvalidGrouping("user index out of range");
  const auto it = lookup_.find(code_of(users));
  if (it == lookup_.end()) throw InvalidGrouping("subset repeats a user");
  return it->second;
}

std::vector<double> GainTable::grouping_gains(const Grouping& grouping) const {
  validate(grouping);
  if (grouping.n_users != n_users_ || grouping.group_size != group_size_) {
    throw InvalidGrouping("grouping does not match the gain table");
  }
  std::vector<double> out(n_users_);
  for (const auto& grp : grouping.groups) {
    const auto gs = gains(index_of(grp));
    for (std::size_t j = 0; j < group_size_; ++j) out[grp[j]] = gs[j];
  }
  return out;
}

double GainTable::subset_rate(std::size_t i, std::span<const double> powers) const {
  const auto us = users(i);
  const auto gs = gains(i);
  double s = 0.0;
  for (std::size_t j = 0; j < group_size_; ++j) s += std::log2(1.0 + powers[us[j]] * gs[j]);
  return s;
}

SearchResult brute_force_optimal(const ChannelMatrix& h, double total_power, std::size_t group_size,
                                 std::uint64_t budget, GainPath path) {
  check_divides(h.n_users(), group_size);
  // Fail on the budget before paying for the table.
  const std::uint64_t count = grouping_count(h.n_users(), group_size);
  if (count > budget) {
    throw BudgetExceeded(std::to_string(count) + " groupings exceed the budget of " +
                         std::to_string(budget));
  }
  return brute_force_optimal(GainTable(h, group_size, path), total_power, budget);
}

SearchResult brute_force_optimal(const GainTable& table, double total_power, std::uint64_t budget) {
  const std::size_t n = table.n_users();
  const std::size_t g = table.group_size();
  check_divides(n, g);

  SearchResult best;
  bool have = false;
  std::size_t evaluated = 0;
  for_each_grouping(n, g, budget, [&](const Grouping& grouping) {
    ++evaluated;
    auto gains = table.grouping_gains(grouping);
    auto alloc = waterfill(gains, total_power);
    const double r = rate_of(grouping, gains, alloc.powers);
    if (!have || r > best.sum_rate) {
      best.grouping = grouping;
      best.powers = std::move(alloc);
      best.sum_rate = r;
      have = true;
    }
    return true;
  });
  best.iterations = evaluated;
  best.rate_trace = {best.sum_rate};
  return best;
}

std::map<UserGroup, double> rate_table(const ChannelMatrix& h, std::span<const double> powers,
                                       std::size_t group_size, GainPath path) {
  check_powers(powers, h.n_users());
  const GainTable table(h, group_size, path);
  std::map<UserGroup, double> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto us = table.users(i);
    out.emplace(UserGroup(us.begin(), us.end()), table.subset_rate(i, powers));
  }
  return out;
}

Grouping guga(const GainTable& table, std::span<const double> powers) {
  const std::size_t n = table.n_users();
  const std::size_t g = table.group_size();
  check_divides(n, g);
  check_powers(powers, n);

  std::vector<double> rates(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) rates[i] = table.subset_rate(i, powers);

  Grouping out;
  out.n_users = n;
  out.group_size = g;
  std::vector<bool> active(n, true);
  for (std::size_t step = 0; step < n / g; ++step) {
    std::size_t best = table.size();
    for (std::size_t i = 0; i < table.size(); ++i) {
      bool ok = true;
      for (std::size_t u : table.users(i)) ok = ok && active[u];
      // Entries are in lexicographic order, so strict > keeps the first.
      if (ok && (best == table.size() || rates[i] > rates[best])) best = i;
    }
    const auto us = table.users(best);
    for (std::size_t u : us) active[u] = false;
    out.groups.emplace_back(us.begin(), us.end());
  }
  return out;
}

Grouping guga(const ChannelMatrix& h, double total_power, std::span<const double> powers,
              std::size_t group_size) {
  check_divides(h.n_users(), group_size);
  check_powers(powers, h.n_users());
  double sum = 0.0;
  for (double p : powers) sum += p;
  if (std::abs(sum - total_power) > 1e-9 * total_power) {
    throw PowerMismatch("powers sum to " + std::to_string(sum) + " instead of " +
                        std::to_string(total_power));
  }
  return guga(GainTable(h, group_size), powers);
}

SearchResult jpauga(const ChannelMatrix& h, double total_power, std::size_t group_size,
                    const JpaugaOptions& options) {
  check_divides(h.n_users(), group_size);
  return jpauga(h, GainTable(h, group_size), total_power, options);
}

SearchResult jpauga(const ChannelMatrix& h, const GainTable& table, double total_power,
                    const JpaugaOptions& options) {
  check_divides(table.n_users(), table.group_size());
  if (table.n_users() != h.n_users()) throw InvalidGrouping("gain table does not match channel");
  if (options.max_itr < 1) throw ConfigError("max_itr must be at least 1");
  if (!(options.rel_threshold >= 0.0)) throw ConfigError("rel_threshold must be nonnegative");

  std::vector<double> zf = zf_gains(h);
  std::vector<double> powers = waterfill(zf, total_power).powers;

  SearchResult res;
  std::vector<double> gains;
  for (std::size_t q = 1; q <= options.max_itr; ++q) {
    Grouping cand = guga(table, powers);
    if (q > 1) {
      if (cand.canonical().groups == res.grouping.canonical().groups) break;  // fixed point
      const auto cand_gains = table.grouping_gains(cand);
      if (rate_of(cand, cand_gains, powers) < rate_of(res.grouping, gains, powers)) break;
    }
    gains = table.grouping_gains(cand);
    auto alloc = waterfill(gains, total_power);
    const double r = rate_of(cand, gains, alloc.powers);
    const double prev = res.rate_trace.empty() ? 0.0 : res.rate_trace.back();

    res.grouping = std::move(cand);
    powers = alloc.powers;
    res.powers = std::move(alloc);
    res.sum_rate = r;
    res.rate_trace.push_back(r);
    res.iterations = q;
    if (q > 1 && r - prev < options.rel_threshold * prev) break;
  }
  return res;
}

}  // namespace groupcast
