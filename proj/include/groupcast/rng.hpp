// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "groupcast/numkit.hpp"

namespace groupcast {

/// (master_seed, stream_index) fully determines a random sequence. Monte
/// Carlo trial t draws from stream_index = t.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent master seed for a named purpose (e.g. the
/// random-grouping draws that accompany each channel draw).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose) {
  return mix64(master ^ mix64(purpose + 0x632BE59BD9B4E019ULL));
}

/// Counter-based generator: output n is mix64(key + (n + 1) * gamma) with
/// both key and the odd increment gamma derived from the seed. Stateless
/// apart from the counter, so any (seed, stream) pair can be materialized
/// independently on any thread.
class StreamRng {
 public:
  explicit StreamRng(RngSeed seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound), bound >= 1, without modulo bias.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller (both outputs used).
  double normal();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  cplx complex_normal();

 private:
  std::uint64_t key_;
  std::uint64_t gamma_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

}  // namespace groupcast
