// SPDX-License-Identifier: Apache-2.0
//
// Group-wise nulling precoder. Users are split into ordered groups; each
// group is beamformed orthogonally to every user outside it, and the
// resulting effective channel inside the group is lower triangular, so
// successive interference pre-subtraction gives user j of a group the
// rate log2(1 + p_j R_jj^2).
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "groupcast/channel.hpp"
#include "groupcast/grouping.hpp"
#include "groupcast/numkit.hpp"
#include "groupcast/powalloc.hpp"

namespace groupcast {

/// Beamforming basis and effective channel for one group.
///
/// q spans the projection of the group's channel vectors onto the
/// orthogonal complement of the other users' rows; r is upper triangular
/// with positive diagonal, G q = r^H and (other users' rows) q = 0.
struct GroupPrecoding {
  CMatrix q;  // N_t x g
  CMatrix r;  // g x g
  std::size_t group_index = 0;
};

struct RateReport {
  std::vector<double> per_user_rates;   // bpcu, indexed by user
  std::vector<double> per_group_rates;  // bpcu, indexed by group
  double sum_rate = 0.0;
  double water_level = 0.0;
  PowerAllocation powers;
  /// Effective gain R_jj^2 of every user, indexed by user.
  std::vector<double> gains;
};

/// P[k] = I - H[k]^H (H[k] H[k]^H)^{-1} H[k], where H[k] holds the rows of
/// users outside group k. Identity when group k holds every user.
CMatrix complement_projector(const ChannelMatrix& h, const Grouping& grouping, std::size_t k,
                             const Tolerances& tol = kDefaultTolerances);

/// Projector for an arbitrary ordered subset of users (the rest are
/// treated as out-of-group).
CMatrix complement_projector(const ChannelMatrix& h, std::span<const std::size_t> users,
                             const Tolerances& tol = kDefaultTolerances);

/// q, r from the positive-diagonal QR of P[k] G[k]^H.
GroupPrecoding effective_channel(const ChannelMatrix& h, const Grouping& grouping, std::size_t k,
                                 const Tolerances& tol = kDefaultTolerances);
/// Same for an arbitrary ordered subset; group_index is left at 0.
GroupPrecoding effective_channel(const ChannelMatrix& h, std::span<const std::size_t> users,
                                 const Tolerances& tol = kDefaultTolerances);

/// sum_j log2(1 + p_j r_jj^2) for one group.
double group_rate(const CMatrix& r, std::span<const double> powers);

/// R_jj^2 for every user of `grouping` (indexed by user), via the QR path.
std::vector<double> effective_gains(const ChannelMatrix& h, const Grouping& grouping,
                                    const Tolerances& tol = kDefaultTolerances);

/// Assembles a report from per-user gains and powers.
RateReport make_report(const Grouping& grouping, std::vector<double> gains, PowerAllocation p);

/// Sum rate for a caller-chosen power vector (indexed by user). Throws
/// PowerMismatch unless p >= 0 and sum p = total_power within
/// 1e-9 * total_power.
RateReport sum_rate_fixed_power(const ChannelMatrix& h, double total_power,
                                const Grouping& grouping, std::span<const double> powers,
                                const Tolerances& tol = kDefaultTolerances);

/// Sum rate with powers waterfilled over the effective gains.
RateReport sum_rate_opt_power(const ChannelMatrix& h, double total_power,
                              const Grouping& grouping,
                              const Tolerances& tol = kDefaultTolerances);

/// Zero-forcing sum rate from the diagonal of (H H^H)^{-1} with waterfilled
/// powers. Equals sum_rate_opt_power on the all-singletons grouping.
RateReport zf_sum_rate(const ChannelMatrix& h, double total_power);

/// D[k] = Q[k] diag(sqrt(p_k1), ..., sqrt(p_kg)) for every group.
std::vector<CMatrix> build_transmit_matrices(const ChannelMatrix& h, const Grouping& grouping,
                                             std::span<const double> powers,
                                             const Tolerances& tol = kDefaultTolerances);

/// max over i != k of max-abs(G[i] Q[k]): leakage between groups.
double residual_interference(const ChannelMatrix& h, const Grouping& grouping,
                             const Tolerances& tol = kDefaultTolerances);

}  // namespace groupcast
