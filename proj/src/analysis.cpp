// SPDX-License-Identifier: Apache-2.0
#include "groupcast/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "groupcast/errors.hpp"
#include "groupcast/fastpath.hpp"
#include "groupcast/parallel.hpp"
#include "groupcast/powalloc.hpp"
#include "groupcast/precoder.hpp"

namespace groupcast {

namespace {

// Stream purposes for derive_seed.
constexpr std::uint64_t kGapPairingPurpose = 0x6761'7070'6169'7273ULL;

double e1_series(double z) {
  // -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -z / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(z) - sum;
}

// e^z E_1(z) by modified Lentz on the continued fraction, z >= 1.
double e1_scaled_cf(double z) {
  constexpr double kTiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

void check_e1_arg(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("E1 needs a positive finite argument");
}

}  // namespace

double exp_integral_e1(double z) {
  check_e1_arg(z);
  return z < 1.0 ? e1_series(z) : std::exp(-z) * e1_scaled_cf(z);
}

double exp_integral_e1_scaled(double z) {
  check_e1_arg(z);
  return z < 1.0 ? std::exp(z) * e1_series(z) : e1_scaled_cf(z);
}

GapResult gap_closed_form(double p_t, std::size_t n_u) {
  if (!(p_t > 0.0) || !std::isfinite(p_t)) throw DomainError("P_T must be positive");
  if (n_u < 2 || n_u % 2 != 0) throw DomainError("N_u must be even and at least 2");
  const double n = static_cast<double>(n_u);
  const double c = n / 2.0 * std::numbers::log2e;
  const double z = n / p_t;
  GapResult r;
  r.p_t = p_t;
  r.n_u = n_u;
  r.closed_form = c * (1.0 - z * exp_integral_e1_scaled(z));
  r.lower_bound = c * (1.0 - z * std::log1p(p_t / n));
  r.upper_bound = c * (1.0 - z * 0.5 * std::log1p(2.0 * p_t / n));
  return r;
}

GapEstimate monte_carlo_gap(std::size_t n_u, double p_t, std::size_t trials, std::uint64_t seed,
                            std::size_t workers) {
  if (n_u < 2 || n_u % 2 != 0) throw DomainError("N_u must be even and at least 2");
  if (!(p_t > 0.0)) throw DomainError("P_T must be positive");
  if (trials == 0) throw ConfigError("trials must be at least 1");

  const double p = p_t / static_cast<double>(n_u);
  std::vector<double> diff(trials);
  parallel_for(
      trials,
      [&](std::size_t t) {
        const ChannelMatrix h = rayleigh(n_u, n_u, {seed, t});
        const GramInverseCache cache(h);
        const Grouping pairs =
            random_grouping(n_u, 2, {derive_seed(seed, kGapPairingPurpose), t});
        double grouped = 0.0;
        double g2[2];
        for (const auto& grp : pairs.groups) {
          effective_gains_fast(cache, grp, g2);
          grouped += std::log2(1.0 + p * g2[0]) + std::log2(1.0 + p * g2[1]);
        }
        double zf = 0.0;
        for (std::size_t i = 0; i < n_u; ++i) zf += std::log2(1.0 + p / cache.hhh_inv()(i, i).real());
        diff[t] = grouped - zf;
      },
      workers);

  double mean = 0.0;
  for (double d : diff) mean += d;
  mean /= static_cast<double>(trials);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  GapEstimate out;
  out.mean = mean;
  out.trials = trials;
  out.std_error = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) / trials) : 0.0;
  return out;
}

double snr_gap_db(std::size_t) { return 10.0 * std::log10(std::sqrt(std::numbers::e)); }

Scheme parse_scheme(const std::string& name) {
  if (name == "zf") return Scheme::kZf;
  if (name == "random") return Scheme::kRandom;
  if (name == "guga") return Scheme::kGuga;
  if (name == "jpauga") return Scheme::kJpauga;
  if (name == "brute") return Scheme::kBrute;
  if (name == "zfdp") return Scheme::kZfdp;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kZf: return "zf";
    case Scheme::kRandom: return "random";
    case Scheme::kGuga: return "guga";
    case Scheme::kJpauga: return "jpauga";
    case Scheme::kBrute: return "brute";
    case Scheme::kZfdp: return "zfdp";
  }
  return "?";
}

namespace {

std::string scheme_tag(Scheme s, const SchemeParams& params) {
  if (s != Scheme::kJpauga) return scheme_name(s);
  std::ostringstream os;
  os << "jpauga(max_itr=" << params.jpauga.max_itr
     << ",rel_threshold=" << params.jpauga.rel_threshold << ")";
  return os.str();
}

}  // namespace

double scheme_rate(Scheme scheme, const ChannelMatrix& h, double p_t, std::size_t g,
                   const SchemeParams& params, std::uint64_t seed, std::uint64_t trial) {
  const std::size_t n = h.n_users();
  switch (scheme) {
    case Scheme::kZf:
      return zf_sum_rate(h, p_t).sum_rate;
    case Scheme::kRandom: {
      const GramInverseCache cache(h);
      const Grouping grp = random_grouping(n, g, {derive_seed(seed, kRandomGroupingPurpose), trial});
      std::vector<double> gains(n);
      std::vector<double> buf(g);
      for (const auto& users : grp.groups) {
        effective_gains_fast(cache, users, buf);
        for (std::size_t j = 0; j < g; ++j) gains[users[j]] = buf[j];
      }
      const auto alloc = waterfill(gains, p_t);
      return sum_log_rate(alloc.powers, gains);
    }
    case Scheme::kGuga: {
      JpaugaOptions one = params.jpauga;
      one.max_itr = 1;
      return jpauga(h, p_t, g, one).sum_rate;
    }
    case Scheme::kJpauga:
      return jpauga(h, p_t, g, params.jpauga).sum_rate;
    case Scheme::kBrute:
      return brute_force_optimal(h, p_t, g, params.budget).sum_rate;
    case Scheme::kZfdp:
      return brute_force_optimal(h, p_t, n, params.budget).sum_rate;
  }
  return 0.0;
}

RateSamples rate_distribution(Scheme scheme, std::size_t n_u, std::size_t n_t, double p_t,
                              std::size_t g, std::size_t trials, std::uint64_t seed,
                              const SchemeParams& params, std::size_t workers) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (n_t < n_u || n_u == 0) throw BadDimensions("need N_t >= N_u >= 1");
  const std::size_t g_eff = scheme == Scheme::kZfdp ? n_u : (scheme == Scheme::kZf ? 1 : g);
  if (g_eff == 0 || n_u % g_eff != 0) throw InvalidGrouping("group size must divide N_u");
  if (scheme == Scheme::kBrute || scheme == Scheme::kZfdp) {
    const std::uint64_t count = grouping_count(n_u, g_eff);
    if (count > params.budget) {
      throw BudgetExceeded(std::to_string(count) + " groupings exceed the budget of " +
                           std::to_string(params.budget));
    }
  }

  RateSamples out;
  out.scheme = scheme_tag(scheme, params);
  out.seed = seed;
  out.n_u = n_u;
  out.n_t = n_t;
  out.p_t = p_t;
  out.g = g_eff;
  out.samples.resize(trials);
  out.fingerprints.resize(trials);
  parallel_for(
      trials,
      [&](std::size_t t) {
        const ChannelMatrix h = rayleigh(n_u, n_t, {seed, t});
        out.fingerprints[t] = h.fingerprint();
        out.samples[t] = scheme_rate(scheme, h, p_t, g_eff, params, seed, t);
      },
      workers);
  return out;
}

double critical_rate(std::span<const double> samples, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("prob must lie in (0, 1)");
  const double need = 10.0 / prob;
  if (static_cast<double>(samples.size()) < need) {
    throw TooFewSamples(std::to_string(samples.size()) + " samples; at least " +
                        std::to_string(static_cast<std::uint64_t>(std::ceil(need))) +
                        " needed for prob " + std::to_string(prob));
  }
  std::vector<double> s(samples.begin(), samples.end());
  const auto k = static_cast<std::size_t>(std::floor(prob * static_cast<double>(s.size() - 1)));
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k), s.end());
  return s[k];
}

double critical_rate(const RateSamples& samples, double prob) {
  return critical_rate(samples.samples, prob);
}

Histogram histogram(std::span<const double> samples, std::size_t bins) {
  Histogram h;
  h.counts.assign(bins, 0);
  if (samples.empty() || bins == 0) return h;
  h.hi = *std::max_element(samples.begin(), samples.end());
  if (!(h.hi > 0.0)) {
    h.counts[0] = samples.size();
    return h;
  }
  const double width = h.hi / static_cast<double>(bins);
  for (double x : samples) {
    auto b = static_cast<std::size_t>(std::max(0.0, x) / width);
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

double prob_below(std::span<const double> samples, double x) {
  if (samples.empty()) return 0.0;
  const auto c = std::count_if(samples.begin(), samples.end(), [x](double v) { return v < x; });
  return static_cast<double>(c) / static_cast<double>(samples.size());
}

Summary summarize(std::span<const double> samples, double below_threshold) {
  if (samples.empty()) throw TooFewSamples("no samples to summarize");
  Summary s;
  s.n = samples.size();
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  for (double v : samples) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.std = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
  s.min = sorted.front();
  s.max = sorted.back();
  for (double q : {0.001, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) {
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(s.n - 1)));
    s.quantiles.emplace_back(q, sorted[k]);
  }
  if (static_cast<double>(s.n) >= 10.0 / 1e-3) s.critical_rate_1e3 = critical_rate(samples, 1e-3);
  s.below_threshold = below_threshold;
  s.prob_below = prob_below(samples, below_threshold);
  s.histogram = histogram(samples);
  return s;
}

}  // namespace groupcast
