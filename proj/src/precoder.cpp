// SPDX-License-Identifier: Apache-2.0
#include "groupcast/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "groupcast/errors.hpp"

namespace groupcast {

namespace {

std::vector<std::size_t> users_outside(std::size_t n_users, std::span<const std::size_t> users) {
  std::vector<bool> inside(n_users, false);
  for (std::size_t u : users) {
    if (u >= n_users) throw InvalidGrouping("user index out of range");
    if (inside[u]) throw InvalidGrouping("user repeated within a group");
    inside[u] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < n_users; ++u)
    if (!inside[u]) out.push_back(u);
  return out;
}

void check_grouping(const ChannelMatrix& h, const Grouping& grouping) {
  validate(grouping);
  if (grouping.n_users != h.n_users()) {
    throw InvalidGrouping("grouping covers " + std::to_string(grouping.n_users) +
                          " users but the channel has " + std::to_string(h.n_users()));
  }
}

}  // namespace

CMatrix complement_projector(const ChannelMatrix& h, const Grouping& grouping, std::size_t k,
                             const Tolerances& tol) {
  check_grouping(h, grouping);
  return complement_projector(h, grouping.groups.at(k), tol);
}

CMatrix complement_projector(const ChannelMatrix& h, std::span<const std::size_t> users,
                             const Tolerances& tol) {
  const auto others = users_outside(h.n_users(), users);
  const std::size_t nt = h.n_tx();
  CMatrix p = CMatrix::identity(nt);
  if (others.empty()) return p;

  const CMatrix hk = h.matrix().select_rows(others);
  CMatrix gram_inv;
  try {
    gram_inv = hermitian_inverse(hk * hk.adjoint(), tol);
  } catch (const NotPositiveDefinite& e) {
    throw RankDeficient(std::string("rows outside group are dependent: ") + e.what());
  }
  return p - hk.adjoint() * (gram_inv * hk);
}

GroupPrecoding effective_channel(const ChannelMatrix& h, const Grouping& grouping, std::size_t k,
                                 const Tolerances& tol) {
  check_grouping(h, grouping);
  auto gp = effective_channel(h, grouping.groups.at(k), tol);
  gp.group_index = k;
  return gp;
}

GroupPrecoding effective_channel(const ChannelMatrix& h, std::span<const std::size_t> users,
                                 const Tolerances& tol) {
  const CMatrix p = complement_projector(h, users, tol);
  const CMatrix g = h.matrix().select_rows(users);
  auto [q, r] = qr_positive(p * g.adjoint(), tol);
  return {std::move(q), std::move(r), 0};
}

double group_rate(const CMatrix& r, std::span<const double> powers) {
  double s = 0.0;
  for (std::size_t j = 0; j < r.rows(); ++j) s += std::log2(1.0 + powers[j] * std::norm(r(j, j)));
  return s;
}

std::vector<double> effective_gains(const ChannelMatrix& h, const Grouping& grouping,
                                    const Tolerances& tol) {
  check_grouping(h, grouping);
  std::vector<double> gains(grouping.n_users, 0.0);
  for (std::size_t k = 0; k < grouping.n_groups(); ++k) {
    const auto gp = effective_channel(h, grouping, k, tol);
    const double scale = std::max(1.0, gp.r.max_abs());
    for (std::size_t j = 0; j < grouping.group_size; ++j) {
      const double rjj = gp.r(j, j).real();
      if (rjj <= tol.rank_rel * scale) throw RankDeficient("vanishing effective gain");
      gains[grouping.groups[k][j]] = rjj * rjj;
    }
  }
  return gains;
}

RateReport make_report(const Grouping& grouping, std::vector<double> gains, PowerAllocation p) {
  RateReport rep;
  rep.per_user_rates.assign(grouping.n_users, 0.0);
  rep.per_group_rates.assign(grouping.n_groups(), 0.0);
  for (std::size_t k = 0; k < grouping.n_groups(); ++k) {
    for (std::size_t u : grouping.groups[k]) {
      const double r = std::log2(1.0 + p.powers[u] * gains[u]);
      rep.per_user_rates[u] = r;
      rep.per_group_rates[k] += r;
    }
  }
  for (double r : rep.per_user_rates) rep.sum_rate += r;
  rep.water_level = p.water_level;
  rep.powers = std::move(p);
  rep.gains = std::move(gains);
  return rep;
}

RateReport sum_rate_fixed_power(const ChannelMatrix& h, double total_power,
                                const Grouping& grouping, std::span<const double> powers,
                                const Tolerances& tol) {
  if (powers.size() != h.n_users()) throw PowerMismatch("power vector length differs from N_u");
  double sum = 0.0;
  for (double p : powers) {
    if (!(p >= 0.0)) throw PowerMismatch("negative power");
    sum += p;
  }
  if (std::abs(sum - total_power) > 1e-9 * total_power) {
    throw PowerMismatch("powers sum to " + std::to_string(sum) + " instead of " +
                        std::to_string(total_power));
  }
  PowerAllocation alloc{{powers.begin(), powers.end()}, total_power, 0.0};
  return make_report(grouping, effective_gains(h, grouping, tol), std::move(alloc));
}

RateReport sum_rate_opt_power(const ChannelMatrix& h, double total_power,
                              const Grouping& grouping, const Tolerances& tol) {
  auto gains = effective_gains(h, grouping, tol);
  auto alloc = waterfill(gains, total_power);
  return make_report(grouping, std::move(gains), std::move(alloc));
}

RateReport zf_sum_rate(const ChannelMatrix& h, double total_power) {
  auto gains = zf_gains(h);
  auto alloc = waterfill(gains, total_power);
  return make_report(Grouping::singletons(h.n_users()), std::move(gains), std::move(alloc));
}

std::vector<CMatrix> build_transmit_matrices(const ChannelMatrix& h, const Grouping& grouping,
                                             std::span<const double> powers,
                                             const Tolerances& tol) {
  check_grouping(h, grouping);
  if (powers.size() != h.n_users()) throw PowerMismatch("power vector length differs from N_u");
  std::vector<CMatrix> out;
  out.reserve(grouping.n_groups());
  for (std::size_t k = 0; k < grouping.n_groups(); ++k) {
    CMatrix d = effective_channel(h, grouping, k, tol).q;
    for (std::size_t j = 0; j < grouping.group_size; ++j) {
      const double p = powers[grouping.groups[k][j]];
      if (!(p >= 0.0)) throw PowerMismatch("negative power");
      const double w = std::sqrt(p);
      for (std::size_t i = 0; i < d.rows(); ++i) d(i, j) *= w;
    }
    out.push_back(std::move(d));
  }
  return out;
}

double residual_interference(const ChannelMatrix& h, const Grouping& grouping,
                             const Tolerances& tol) {
  check_grouping(h, grouping);
  std::vector<CMatrix> qs;
  for (std::size_t k = 0; k < grouping.n_groups(); ++k)
    qs.push_back(effective_channel(h, grouping, k, tol).q);
  double worst = 0.0;
  for (std::size_t i = 0; i < grouping.n_groups(); ++i) {
    const CMatrix gi = h.matrix().select_rows(grouping.groups[i]);
    for (std::size_t k = 0; k < grouping.n_groups(); ++k) {
      if (k == i) continue;
      worst = std::max(worst, (gi * qs[k]).max_abs());
    }
  }
  return worst;
}

}  // namespace groupcast
