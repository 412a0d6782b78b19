// SPDX-License-Identifier: Apache-2.0
#include "groupcast/rng.hpp"

#include <cmath>
#include <numbers>

namespace groupcast {

StreamRng::StreamRng(RngSeed seed)
    : key_(mix64(seed.master_seed ^ mix64(seed.stream_index ^ 0xD1B54A32D192ED03ULL))),
      gamma_(mix64(seed.stream_index + mix64(seed.master_seed + 0x9E3779B97F4A7C15ULL)) | 1ULL) {}

std::uint64_t StreamRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * gamma_);
}

double StreamRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t StreamRng::below(std::uint64_t bound) {
  // Lemire-style rejection on the high word.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

double StreamRng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

cplx StreamRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace groupcast
