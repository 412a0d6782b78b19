// SPDX-License-Identifier: Apache-2.0
//
// Effective channels from a cached (H H^H)^{-1}.
//
// For an ordered group with users (k_1..k_g), let B be the g x g block of
// (H H^H)^{-1} at those rows and columns, in that order. Block inversion
// of the row-permuted Gram matrix shows F^H F = B^{-1}, so R is the
// Cholesky factor of B^{-1}: O(g^3) per group once the cache exists.
// Likewise F = H^H (H H^H)^{-1}[:, group] B^{-1}, which avoids forming the
// N_t x N_t projector.
//
// The permutation is never materialized; B is read straight out of the
// cache by index, which costs O(g^2) rather than the O(g N_u) of copying
// the permuted columns.
#pragma once

#include <cstdint>
#include <span>

#include "groupcast/channel.hpp"
#include "groupcast/grouping.hpp"
#include "groupcast/numkit.hpp"

namespace groupcast {

class GramInverseCache {
 public:
  /// Throws RankDeficient if H H^H is not positive definite.
  explicit GramInverseCache(const ChannelMatrix& h, const Tolerances& tol = kDefaultTolerances);

  const CMatrix& hhh_inv() const { return hhh_inv_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  std::size_t n_users() const { return hhh_inv_.rows(); }

  /// Throws StaleCache unless `h` is the channel the cache was built from.
  void check_source(const ChannelMatrix& h) const;

 private:
  CMatrix hhh_inv_;
  std::uint64_t fingerprint_;
};

GramInverseCache build_cache(const ChannelMatrix& h, const Tolerances& tol = kDefaultTolerances);

/// R for an ordered group of users. Throws NotPositiveDefinite when the
/// selected block is numerically singular.
CMatrix effective_r_fast(const GramInverseCache& cache, std::span<const std::size_t> users,
                         const Tolerances& tol = kDefaultTolerances);
CMatrix effective_r_fast(const GramInverseCache& cache, const Grouping& grouping, std::size_t k,
                         const Tolerances& tol = kDefaultTolerances);

/// R_jj^2 for an ordered group, written to `out` (size g).
void effective_gains_fast(const GramInverseCache& cache, std::span<const std::size_t> users,
                          std::span<double> out, const Tolerances& tol = kDefaultTolerances);

/// Q for group k via F = H^H (H H^H)^{-1}[:, group] B^{-1} and a
/// positive-diagonal QR. Throws StaleCache if `cache` was built from a
/// different channel.
CMatrix beamformer_fast(const ChannelMatrix& h, const GramInverseCache& cache,
                        const Grouping& grouping, std::size_t k,
                        const Tolerances& tol = kDefaultTolerances);

}  // namespace groupcast
