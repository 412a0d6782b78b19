// SPDX-License-Identifier: Apache-2.0
//
// Ergodic gap between paired precoding and zero forcing, Monte Carlo rate
// distributions over i.i.d. Rayleigh channels, and summary statistics.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "groupcast/grouping.hpp"
#include "groupcast/search.hpp"

namespace groupcast {

/// E_1(z) = integral from z to infinity of e^{-t}/t dt. Throws DomainError
/// for z <= 0 or non-finite z.
double exp_integral_e1(double z);

/// e^z E_1(z), finite for every z > 0.
double exp_integral_e1_scaled(double z);

struct GapResult {
  double closed_form = 0.0;  // bpcu
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double p_t = 0.0;
  std::size_t n_u = 0;
};

/// Expected rate gain of random pairing over zero forcing at uniform
/// power, N_t = N_u, and its logarithmic bounds. n_u must be even and
/// at least 2.
GapResult gap_closed_form(double p_t, std::size_t n_u);

struct GapEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Sample mean of [paired rate - ZF rate] at uniform power p_i = P_T/N_u
/// over square Rayleigh channels and uniformly random pairings.
GapEstimate monte_carlo_gap(std::size_t n_u, double p_t, std::size_t trials, std::uint64_t seed,
                            std::size_t workers = 0);

/// 10 log10(sqrt(e)): the asymptotic extra power zero forcing needs.
double snr_gap_db(std::size_t n_u);

/// derive_seed purpose of the random-grouping stream; trial t uses
/// stream index t.
inline constexpr std::uint64_t kRandomGroupingPurpose = 0x7261'6e64'6772'7070ULL;

enum class Scheme { kZf, kRandom, kGuga, kJpauga, kBrute, kZfdp };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct SchemeParams {
  JpaugaOptions jpauga;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

struct RateSamples {
  std::string scheme;  // e.g. "zf", "jpauga(max_itr=1,rel_threshold=0.0001)"
  std::vector<double> samples;
  std::vector<std::uint64_t> fingerprints;  // channel of each trial
  std::uint64_t seed = 0;
  std::size_t n_u = 0;
  std::size_t n_t = 0;
  double p_t = 0.0;
  std::size_t g = 0;
};

/// Sum rate of one scheme on one channel. `trial` picks the random
/// grouping stream for Scheme::kRandom. zfdp searches every user order
/// with a single group of size N_u.
double scheme_rate(Scheme scheme, const ChannelMatrix& h, double p_t, std::size_t g,
                   const SchemeParams& params, std::uint64_t seed, std::uint64_t trial);

/// Trial t draws H from stream (seed, t), so every scheme sees the same
/// channels for the same seed.
RateSamples rate_distribution(Scheme scheme, std::size_t n_u, std::size_t n_t, double p_t,
                              std::size_t g, std::size_t trials, std::uint64_t seed,
                              const SchemeParams& params = {}, std::size_t workers = 0);

/// Lower empirical quantile: sorted[floor(prob (n-1))]. Throws
/// TooFewSamples when n < 10/prob and DomainError unless 0 < prob < 1.
double critical_rate(std::span<const double> samples, double prob);
double critical_rate(const RateSamples& samples, double prob);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double min = 0.0;
  double max = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (prob, value)
  std::optional<double> critical_rate_1e3;
  double below_threshold = 0.0;
  double prob_below = 0.0;
  Histogram histogram;
};

/// 100 uniform bins over [0, max sample].
Histogram histogram(std::span<const double> samples, std::size_t bins = 100);

Summary summarize(std::span<const double> samples, double below_threshold = 6.0);

/// Fraction of samples strictly below x.
double prob_below(std::span<const double> samples, double x);

}  // namespace groupcast
