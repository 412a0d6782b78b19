// SPDX-License-Identifier: Apache-2.0
#include "groupcast/fastpath.hpp"

#include <string>

#include "groupcast/errors.hpp"

namespace groupcast {

GramInverseCache::GramInverseCache(const ChannelMatrix& h, const Tolerances& tol)
    : fingerprint_(h.fingerprint()) {
  const CMatrix& m = h.matrix();
  try {
    hhh_inv_ = hermitian_inverse(m * m.adjoint(), tol);
  } catch (const NotPositiveDefinite& e) {
    throw RankDeficient(std::string("H H^H is not invertible: ") + e.what());
  }
}

void GramInverseCache::check_source(const ChannelMatrix& h) const {
  if (h.fingerprint() != fingerprint_) {
    throw StaleCache("cache was built from channel " + fingerprint_hex(fingerprint_) +
                     ", queried with " + fingerprint_hex(h.fingerprint()));
  }
}

GramInverseCache build_cache(const ChannelMatrix& h, const Tolerances& tol) {
  return GramInverseCache(h, tol);
}

CMatrix effective_r_fast(const GramInverseCache& cache, std::span<const std::size_t> users,
                         const Tolerances& tol) {
  const CMatrix block = cache.hhh_inv().principal_submatrix(users);
  return cholesky_upper(hermitian_inverse(block, tol), tol);
}

CMatrix effective_r_fast(const GramInverseCache& cache, const Grouping& grouping, std::size_t k,
                         const Tolerances& tol) {
  return effective_r_fast(cache, grouping.groups.at(k), tol);
}

void effective_gains_fast(const GramInverseCache& cache, std::span<const std::size_t> users,
                          std::span<double> out, const Tolerances& tol) {
  const CMatrix r = effective_r_fast(cache, users, tol);
  for (std::size_t j = 0; j < users.size(); ++j) out[j] = std::norm(r(j, j));
}

CMatrix beamformer_fast(const ChannelMatrix& h, const GramInverseCache& cache,
                        const Grouping& grouping, std::size_t k, const Tolerances& tol) {
  cache.check_source(h);
  const auto& users = grouping.groups.at(k);
  const CMatrix block = cache.hhh_inv().principal_submatrix(users);
  const CMatrix block_inv = hermitian_inverse(block, tol);
  // Columns of the Gram inverse for the group, right-multiplied by the
  // block inverse: [I_g; -(H[k]H[k]^H)^{-1} H[k] G[k]^H] up to row order.
  const CMatrix a = cache.hhh_inv().select_cols(users) * block_inv;
  const CMatrix f = h.matrix().adjoint() * a;
  return qr_positive(f, tol).q;
}

}  // namespace groupcast
