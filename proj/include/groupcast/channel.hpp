// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "groupcast/numkit.hpp"
#include "groupcast/rng.hpp"

namespace groupcast {

/// Downlink channel: row k is user k's conjugated channel vector, so
/// entry (k, i) is the gain from transmit antenna i to user k.
///
/// Construction enforces N_t >= N_u >= 1, finite entries and full row
/// rank; degenerate matrices are rejected, never regularized.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(CMatrix matrix, const Tolerances& tol = kDefaultTolerances);

  const CMatrix& matrix() const { return matrix_; }
  std::size_t n_users() const { return matrix_.rows(); }
  std::size_t n_tx() const { return matrix_.cols(); }

  /// FNV-1a over the raw bytes of the entries; identifies a channel draw.
  std::uint64_t fingerprint() const;

  friend bool operator==(const ChannelMatrix& a, const ChannelMatrix& b) {
    return a.matrix_ == b.matrix_;
  }

 private:
  CMatrix matrix_;
};

/// The 6x6 ill-conditioned example channel with entries in
/// {0, +-1/2, +-1/sqrt(2)} and unit-norm rows.
ChannelMatrix builtin_hex();

/// I.i.d. CN(0, 1) entries. Throws BadDimensions unless n_tx >= n_users >= 1.
ChannelMatrix rayleigh(std::size_t n_users, std::size_t n_tx, RngSeed seed);

/// JSON: {"n_users": int, "n_tx": int, "entries": [[[re, im], ...], ...]}.
std::string channel_to_json(const ChannelMatrix& h);
ChannelMatrix channel_from_json(const std::string& text);

void save_channel(const ChannelMatrix& h, const std::filesystem::path& path);
ChannelMatrix load_channel(const std::filesystem::path& path);

/// Hex string of fingerprint(), zero padded to 16 digits.
std::string fingerprint_hex(std::uint64_t fp);

}  // namespace groupcast
