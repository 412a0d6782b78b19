// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "groupcast/numkit.hpp"
#include "groupcast/rng.hpp"

namespace helpers {

inline groupcast::CMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  groupcast::StreamRng rng({seed, 0});
  groupcast::CMatrix m(rows, cols);
  for (auto& x : m.data()) x = rng.complex_normal();
  return m;
}

inline bool is_upper(const groupcast::CMatrix& r, double tol = 0.0) {
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < i && j < r.cols(); ++j)
      if (std::abs(r(i, j)) > tol) return false;
  return true;
}

}  // namespace helpers
