// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "groupcast/rng.hpp"

namespace groupcast {

/// An ordered group: the position of a user inside it matters, because
/// each user is only shielded from the users before it.
using UserGroup = std::vector<std::size_t>;

/// Partition of users {0..n_users-1} into n_users / group_size ordered
/// groups. Indices are zero-based in memory and one-based in every
/// serialized form.
///
/// The order of the groups themselves carries no meaning; canonical()
/// sorts them by first user for equality tests, leaving each group's
/// internal order untouched.
struct Grouping {
  std::vector<UserGroup> groups;
  std::size_t n_users = 0;
  std::size_t group_size = 0;

  std::size_t n_groups() const { return groups.size(); }

  Grouping canonical() const;

  /// Builds from one-based user lists, e.g. {{2, 5}, {3, 1}, {4, 6}}.
  static Grouping from_one_based(const std::vector<std::vector<std::size_t>>& groups);
  /// Every user alone in its own group (the zero-forcing case).
  static Grouping singletons(std::size_t n_users);
  /// One group holding all users in index order.
  static Grouping single_group(std::size_t n_users);

  /// Nested JSON arrays of one-based indices, e.g. [[2,5],[3,1],[4,6]].
  std::string to_json() const;
};

/// Equal as unordered collections of ordered groups.
bool same_grouping(const Grouping& a, const Grouping& b);

/// Throws InvalidGrouping on duplicate or missing users, unequal group
/// sizes, or a group size that does not divide n_users.
void validate(const Grouping& grouping);

/// |A_n^(g)| = n! / (n/g)!, saturating at UINT64_MAX.
std::uint64_t grouping_count(std::size_t n_users, std::size_t group_size);

/// Number of ordered g-subsets of n users, n! / (n-g)!.
std::uint64_t ordered_subset_count(std::size_t n_users, std::size_t group_size);

/// Visits every grouping exactly once in a fixed lexicographic order: the
/// group holding the smallest unassigned user is chosen first (partners by
/// ascending combination, then every ordering of those users in
/// lexicographic permutation order), then the rest recursively.
///
/// Throws BudgetExceeded when grouping_count exceeds `budget`. The visitor
/// may return false to stop early.
void for_each_grouping(std::size_t n_users, std::size_t group_size, std::uint64_t budget,
                       const std::function<bool(const Grouping&)>& visit);

/// Materialized for_each_grouping.
std::vector<Grouping> enumerate_groupings(std::size_t n_users, std::size_t group_size,
                                          std::uint64_t budget);

/// Uniform draw from A_n^(g): a uniform permutation cut into consecutive
/// groups (each grouping arises from exactly (n/g)! permutations).
Grouping random_grouping(std::size_t n_users, std::size_t group_size, RngSeed seed);

/// Default cap on brute-force enumeration sizes: admits every grouping set
/// up to N_u = 8 (at most 8! = 40320) but not pairs of 12 users (665280).
inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000;

}  // namespace groupcast
