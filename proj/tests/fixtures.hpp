// SPDX-License-Identifier: Apache-2.0
//
// Published reference values for the built-in 6x6 channel.
#pragma once

#include <array>
#include <cmath>

namespace fixtures {

inline double db(double x) { return std::pow(10.0, x / 10.0); }

// Zero-forcing waterfilled powers at 29 dB.
inline constexpr std::array<double, 6> kZfPowers29 = {57.13, 246.95, 245.29, 0.0, 244.96, 0.0};

// R of the ordered pair (U1, U5) at the same instance.
inline constexpr double kR11 = 0.218;
inline constexpr double kR12 = -0.432;
inline constexpr double kR22 = 0.133;
inline constexpr double kPairRate15 = 4.31;

// Ordered-pair rates I(i, j) at p = kZfPowers29, row i = first user.
// Diagonal entries are unused.
inline constexpr std::array<std::array<double, 6>, 6> kPairRates = {{
    {-1, 4.9, 5.4, 4.5, 4.3, 3.2},
    {6.7, -1, 8.4, 6.8, 9.4, 7.0},
    {7.3, 8.4, -1, 6.4, 7.8, 5.8},
    {0.3, 2.4, 2.4, -1, 2.4, 0.0},
    {6.0, 9.4, 7.8, 6.4, -1, 6.7},
    {0.3, 2.4, 2.4, 0.0, 2.4, -1},
}};

inline constexpr std::array<double, 6> kSingularValues = {1.56, 1.48, 0.97, 0.54, 0.38, 0.028};

}  // namespace fixtures
