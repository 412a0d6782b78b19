// SPDX-License-Identifier: Apache-2.0
//
// Choosing the grouping: exhaustive search, the greedy ordered-subset
// selection (GUGA) and its alternation with waterfilling (JPAUGA).
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "groupcast/channel.hpp"
#include "groupcast/fastpath.hpp"
#include "groupcast/grouping.hpp"
#include "groupcast/powalloc.hpp"

namespace groupcast {

/// Which route computes per-subset effective gains.
enum class GainPath {
  kFast,  // Cholesky of the inverted Gram-inverse block (cached)
  kQr,    // explicit projector + QR, the reference route
};

/// R_jj^2 for every ordered g-subset of the users, stored in lexicographic
/// order of the subsets. An entry depends only on the channel and the
/// ordered subset, never on the powers or on how the other users are
/// grouped.
class GainTable {
 public:
  GainTable(const ChannelMatrix& h, std::size_t group_size, GainPath path = GainPath::kFast);
  GainTable(const ChannelMatrix& h, const GramInverseCache& cache, std::size_t group_size);

  std::size_t n_users() const { return n_users_; }
  std::size_t group_size() const { return group_size_; }
  std::size_t size() const { return n_entries_; }

  /// Users of entry i.
  std::span<const std::size_t> users(std::size_t i) const;
  /// Gains of entry i, aligned with users(i).
  std::span<const double> gains(std::size_t i) const;
  /// Entry index of an ordered subset.
  std::size_t index_of(std::span<const std::size_t> users) const;

  /// Per-user gains of a whole grouping, indexed by user.
  std::vector<double> grouping_gains(const Grouping& grouping) const;

  /// I(s) = sum_j log2(1 + p_{s_j} gain_j(s)) for entry i.
  double subset_rate(std::size_t i, std::span<const double> powers) const;

 private:
  void build(const ChannelMatrix& h, const GramInverseCache* cache, GainPath path);
  std::uint64_t code_of(std::span<const std::size_t> users) const;

  std::size_t n_users_;
  std::size_t group_size_;
  std::size_t n_entries_ = 0;
  std::vector<std::size_t> users_;  // n_entries_ * group_size_
  std::vector<double> gains_;       // n_entries_ * group_size_
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

struct SearchResult {
  Grouping grouping;
  PowerAllocation powers;
  double sum_rate = 0.0;
  std::size_t iterations = 0;
  std::vector<double> rate_trace;
};

/// Exhaustive maximization of the waterfilled sum rate over A_n^(g). The
/// first maximal grouping in enumeration order wins. `iterations` counts
/// the groupings evaluated.
SearchResult brute_force_optimal(const ChannelMatrix& h, double total_power, std::size_t group_size,
                                 std::uint64_t budget = kDefaultEnumerationBudget,
                                 GainPath path = GainPath::kFast);
SearchResult brute_force_optimal(const GainTable& table, double total_power,
                                 std::uint64_t budget = kDefaultEnumerationBudget);

/// I(s) for every ordered g-subset s, each treated as one group with all
/// other users outside it. Keys are zero-based ordered subsets.
std::map<UserGroup, double> rate_table(const ChannelMatrix& h, std::span<const double> powers,
                                       std::size_t group_size, GainPath path = GainPath::kFast);

/// Greedy grouping for fixed powers: repeatedly take the ordered subset of
/// still-active users with the largest I(s) (lexicographically smallest on
/// ties) and retire its users. Groups appear in selection order.
Grouping guga(const GainTable& table, std::span<const double> powers);
Grouping guga(const ChannelMatrix& h, double total_power, std::span<const double> powers,
              std::size_t group_size);

struct JpaugaOptions {
  std::size_t max_itr = 10;
  double rel_threshold = 1e-4;
};

/// Alternates GUGA (powers fixed) and waterfilling (grouping fixed),
/// starting from the zero-forcing waterfilling powers. Stops after
/// max_itr iterations or once the relative gain of an iteration drops
/// below rel_threshold. A GUGA proposal that scores below the incumbent
/// grouping at the current powers is discarded, so rate_trace never
/// decreases.
SearchResult jpauga(const ChannelMatrix& h, double total_power, std::size_t group_size,
                    const JpaugaOptions& options = {});
SearchResult jpauga(const ChannelMatrix& h, const GainTable& table, double total_power,
                    const JpaugaOptions& options = {});

}  // namespace groupcast
