// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace groupcast {

class ChannelMatrix;

/// Per-user transmit powers summing to `total`, with the water level that
/// produced them (for allocations that did not come from waterfilling the
/// level is left at zero).
struct PowerAllocation {
  std::vector<double> powers;
  double total = 0.0;
  double water_level = 0.0;
};

/// p_i = max(mu - 1/gain_i, 0) with sum p_i = total_power.
///
/// The level is found exactly: sort the inverse gains, then shrink the
/// active set from the top until the candidate level clears the largest
/// active inverse gain. A user whose inverse gain equals the level gets
/// zero power.
///
/// Throws EmptyGains for an empty gain vector and DomainError for a
/// non-positive gain or power.
PowerAllocation waterfill(std::span<const double> gains, double total_power);

/// Zero-forcing effective gains 1 / [(H H^H)^{-1}]_{ii}.
std::vector<double> zf_gains(const ChannelMatrix& h);

/// sum_i log2(1 + p_i * gain_i).
double sum_log_rate(std::span<const double> powers, std::span<const double> gains);

}  // namespace groupcast
