// SPDX-License-Identifier: Apache-2.0
#include "groupcast/powalloc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "groupcast/channel.hpp"
#include "groupcast/errors.hpp"

namespace groupcast {

PowerAllocation waterfill(std::span<const double> gains, double total_power) {
  if (gains.empty()) throw EmptyGains("waterfill called with no gains");
  if (!(total_power > 0.0) || !std::isfinite(total_power)) {
    throw DomainError("total power must be positive and finite");
  }
  const std::size_t n = gains.size();
  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gains[i] > 0.0) || !std::isfinite(gains[i])) {
      throw DomainError("gain " + std::to_string(i) + " is not positive");
    }
    inv[i] = 1.0 / gains[i];
  }

  std::vector<double> sorted = inv;
  std::sort(sorted.begin(), sorted.end());

  // With the k smallest inverse gains active, mu = (P + sum of them) / k.
  // The largest k for which mu exceeds the k-th inverse gain is the answer.
  double prefix = 0.0;
  for (double v : sorted) prefix += v;
  double mu = 0.0;
  for (std::size_t k = n; k >= 1; --k) {
    mu = (total_power + prefix) / static_cast<double>(k);
    if (mu > sorted[k - 1]) break;
    prefix -= sorted[k - 1];
  }

  PowerAllocation out;
  out.powers.resize(n);
  out.total = total_power;
  out.water_level = mu;
  for (std::size_t i = 0; i < n; ++i) out.powers[i] = std::max(mu - inv[i], 0.0);
  return out;
}

std::vector<double> zf_gains(const ChannelMatrix& h) {
  const CMatrix& m = h.matrix();
  CMatrix inv;
  try {
    inv = hermitian_inverse(m * m.adjoint());
  } catch (const NotPositiveDefinite& e) {
    throw RankDeficient(std::string("H H^H is not invertible: ") + e.what());
  }
  std::vector<double> g(h.n_users());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = inv(i, i).real();
    if (!(d > 0.0)) throw RankDeficient("non-positive diagonal in (H H^H)^{-1}");
    g[i] = 1.0 / d;
  }
  return g;
}

double sum_log_rate(std::span<const double> powers, std::span<const double> gains) {
  double s = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) s += std::log2(1.0 + powers[i] * gains[i]);
  return s;
}

}  // namespace groupcast
