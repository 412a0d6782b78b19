// SPDX-License-Identifier: Apache-2.0
#include "groupcast/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "groupcast/analysis.hpp"
#include "groupcast/channel.hpp"
#include "groupcast/errors.hpp"
#include "groupcast/fastpath.hpp"
#include "groupcast/grouping.hpp"
#include "groupcast/powalloc.hpp"
#include "groupcast/precoder.hpp"
#include "groupcast/search.hpp"

namespace groupcast {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::uint64_t kVerifySamplePurpose = 0x7665'7269'6679'0001ULL;

struct Options {
  std::string channel_path;
  bool builtin_hex = false;
  std::vector<std::size_t> rayleigh;
  std::uint64_t seed = 1;
  double snr_db = 10.0;
  std::size_t g = 2;
  bool g_given = false;
  std::string scheme = "zf";
  std::string algo = "jpauga";
  std::string grouping;
  std::size_t max_itr = 10;
  double rel_threshold = 1e-4;
  std::size_t trials = 1000;
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::string format = "json";
  std::string out_path;
  double below = 6.0;
  std::size_t n_u = 6;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double power_from_db(double db) {
  if (!std::isfinite(db)) throw ConfigError("--snr-db must be finite");
  return std::pow(10.0, db / 10.0);
}

ChannelMatrix load_source(const Options& o) {
  const int sources = (o.channel_path.empty() ? 0 : 1) + (o.builtin_hex ? 1 : 0) +
                      (o.rayleigh.empty() ? 0 : 1);
  if (sources != 1) {
    throw ConfigError("give exactly one of --channel, --builtin-hex, --rayleigh");
  }
  if (o.builtin_hex) return builtin_hex();
  if (!o.channel_path.empty()) return load_channel(o.channel_path);
  return rayleigh(o.rayleigh.at(0), o.rayleigh.at(1), {o.seed, 0});
}

ojson grouping_json(const Grouping& g) { return ojson::parse(g.to_json()); }

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + o.out_path + " for writing");
  f << text;
}

// Flat key,value CSV of a JSON object; arrays become key_1, key_2, ...
void flatten(const std::string& prefix, const ojson& j, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(prefix.empty() ? k : prefix + "." + k, v, os);
  } else if (j.is_array()) {
    std::size_t i = 1;
    for (const auto& v : j) flatten(prefix + "_" + std::to_string(i++), v, os);
  } else if (j.is_number_float()) {
    os << prefix << ',' << num(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    os << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    os << prefix << ',' << j.dump() << '\n';
  }
}

std::string render(const Options& o, const ojson& j) {
  if (o.format == "json") return j.dump(2) + "\n";
  std::ostringstream os;
  os << "key,value\n";
  flatten("", j, os);
  return os.str();
}

ojson instance_json(const ChannelMatrix& h, double p_t, double snr_db) {
  ojson j;
  j["n_users"] = h.n_users();
  j["n_tx"] = h.n_tx();
  j["snr_db"] = snr_db;
  j["p_t"] = p_t;
  j["channel_fingerprint"] = fingerprint_hex(h.fingerprint());
  return j;
}

JpaugaOptions jpauga_options(const Options& o) { return {o.max_itr, o.rel_threshold}; }

Grouping parse_grouping_flag(const std::string& text) {
  std::vector<std::vector<std::size_t>> groups;
  try {
    groups = nlohmann::json::parse(text).get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("--grouping: ") + e.what());
  }
  auto g = Grouping::from_one_based(groups);
  validate(g);
  return g;
}

// ---- rate ----------------------------------------------------------------

int cmd_rate(const Options& o, std::ostream& out) {
  const ChannelMatrix h = load_source(o);
  const double p_t = power_from_db(o.snr_db);
  const std::size_t n = h.n_users();

  Grouping grouping;
  RateReport rep;
  std::string scheme = o.scheme;
  if (!o.grouping.empty()) {
    grouping = parse_grouping_flag(o.grouping);
    scheme = "fixed";
    rep = sum_rate_opt_power(h, p_t, grouping);
  } else {
    const Scheme s = parse_scheme(o.scheme);
    switch (s) {
      case Scheme::kZf:
        grouping = Grouping::singletons(n);
        break;
      case Scheme::kRandom:
        grouping = random_grouping(n, o.g, {derive_seed(o.seed, kRandomGroupingPurpose), 0});
        break;
      case Scheme::kGuga:
        grouping = jpauga(h, p_t, o.g, {1, o.rel_threshold}).grouping;
        break;
      case Scheme::kJpauga:
        grouping = jpauga(h, p_t, o.g, jpauga_options(o)).grouping;
        break;
      case Scheme::kBrute:
        grouping = brute_force_optimal(h, p_t, o.g, o.budget).grouping;
        break;
      case Scheme::kZfdp:
        grouping = brute_force_optimal(h, p_t, n, o.budget).grouping;
        break;
    }
    rep = s == Scheme::kZf ? zf_sum_rate(h, p_t) : sum_rate_opt_power(h, p_t, grouping);
  }

  ojson j = instance_json(h, p_t, o.snr_db);
  j["scheme"] = scheme;
  j["g"] = grouping.group_size;
  j["grouping"] = grouping_json(grouping);
  j["sum_rate"] = rep.sum_rate;
  j["water_level"] = rep.water_level;
  j["powers"] = rep.powers.powers;
  j["gains"] = rep.gains;
  j["per_user_rates"] = rep.per_user_rates;
  j["per_group_rates"] = rep.per_group_rates;
  j["residual_interference"] = residual_interference(h, grouping);
  emit(o, out, render(o, j));
  return kExitOk;
}

// ---- group ---------------------------------------------------------------

int cmd_group(const Options& o, std::ostream& out) {
  const ChannelMatrix h = load_source(o);
  const double p_t = power_from_db(o.snr_db);

  SearchResult res;
  if (o.algo == "guga") {
    res = jpauga(h, p_t, o.g, {1, o.rel_threshold});
  } else if (o.algo == "jpauga") {
    res = jpauga(h, p_t, o.g, jpauga_options(o));
  } else if (o.algo == "brute") {
    res = brute_force_optimal(h, p_t, o.g, o.budget);
  } else {
    throw ConfigError("unknown --algo '" + o.algo + "'");
  }

  ojson j = instance_json(h, p_t, o.snr_db);
  j["algo"] = o.algo;
  j["g"] = o.g;
  j["grouping"] = grouping_json(res.grouping);
  j["sum_rate"] = res.sum_rate;
  j["water_level"] = res.powers.water_level;
  j["powers"] = res.powers.powers;
  j["iterations"] = res.iterations;
  j["rate_trace"] = res.rate_trace;
  emit(o, out, render(o, j));
  return kExitOk;
}

// ---- montecarlo ------------------------------------------------------------

std::string samples_text(const Options& o, const RateSamples& rs) {
  if (o.format == "json") {
    ojson j;
    j["scheme"] = rs.scheme;
    j["seed"] = rs.seed;
    j["n_u"] = rs.n_u;
    j["n_t"] = rs.n_t;
    j["p_t"] = rs.p_t;
    j["g"] = rs.g;
    j["samples"] = rs.samples;
    ojson fps = ojson::array();
    for (auto fp : rs.fingerprints) fps.push_back(fingerprint_hex(fp));
    j["channel_fingerprints"] = std::move(fps);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "trial,scheme,sum_rate_bpcu,channel_fingerprint\n";
  for (std::size_t t = 0; t < rs.samples.size(); ++t) {
    os << t << ",\"" << rs.scheme << "\"," << num(rs.samples[t]) << ','
       << fingerprint_hex(rs.fingerprints[t]) << '\n';
  }
  return os.str();
}

ojson summary_json(const RateSamples& rs, const Summary& s) {
  ojson j;
  j["scheme"] = rs.scheme;
  j["seed"] = rs.seed;
  j["n_u"] = rs.n_u;
  j["n_t"] = rs.n_t;
  j["p_t"] = rs.p_t;
  j["g"] = rs.g;
  j["trials"] = s.n;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["min"] = s.min;
  j["max"] = s.max;
  ojson q;
  for (const auto& [p, v] : s.quantiles) q[num(p)] = v;
  j["quantiles"] = std::move(q);
  if (s.critical_rate_1e3) {
    j["critical_rate_1e-3"] = *s.critical_rate_1e3;
  } else {
    j["critical_rate_1e-3"] = nullptr;
  }
  j["below_threshold"] = s.below_threshold;
  j["prob_below"] = s.prob_below;
  j["histogram_lo"] = s.histogram.lo;
  j["histogram_hi"] = s.histogram.hi;
  j["histogram_counts"] = s.histogram.counts;
  return j;
}

int cmd_montecarlo(const Options& o, std::ostream& out) {
  if (o.trials < 1) throw ConfigError("--trials must be at least 1");
  std::size_t nu = 6;
  std::size_t nt = 6;
  if (!o.rayleigh.empty()) {
    nu = o.rayleigh.at(0);
    nt = o.rayleigh.at(1);
  }
  const double p_t = power_from_db(o.snr_db);
  SchemeParams params;
  params.jpauga = jpauga_options(o);
  params.budget = o.budget;
  const RateSamples rs =
      rate_distribution(parse_scheme(o.scheme), nu, nt, p_t, o.g, o.trials, o.seed, params);
  const Summary s = summarize(rs.samples, o.below);

  Options summary_opts = o;
  if (!o.out_path.empty()) {
    emit(o, out, samples_text(o, rs));
    summary_opts.out_path = o.out_path + ".summary." + o.format;
  }
  emit(summary_opts, out, render(o, summary_json(rs, s)));
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

class Verifier {
 public:
  Verifier(const ChannelMatrix& h, double p_t, std::uint64_t seed, std::uint64_t budget)
      : h_(h), p_t_(p_t), seed_(seed), budget_(budget) {}

  std::vector<Check> run(const std::vector<std::size_t>& sizes) {
    check_zf();
    for (std::size_t g : sizes) check_group_size(g);
    return std::move(checks_);
  }

 private:
  void add(std::string name, bool pass, std::string detail) {
    checks_.push_back({std::move(name), pass, std::move(detail)});
  }

  void check_zf() {
    const RateReport zf = zf_sum_rate(h_, p_t_);
    const auto gains = zf.gains;
    const auto g1 = effective_gains(h_, Grouping::singletons(h_.n_users()));
    double worst = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i)
      worst = std::max(worst, std::abs(g1[i] - gains[i]) / gains[i]);
    add("single_user_groups_match_zf_gains", worst <= 1e-8, "max rel diff " + num(worst));

    const auto& p = zf.powers;
    double sum = 0.0;
    double kkt = 0.0;
    bool nonneg = true;
    for (std::size_t i = 0; i < gains.size(); ++i) {
      sum += p.powers[i];
      nonneg = nonneg && p.powers[i] >= 0.0;
      if (p.powers[i] > 0.0) kkt = std::max(kkt, std::abs(p.powers[i] + 1.0 / gains[i] - p.water_level));
      else kkt = std::max(kkt, std::max(0.0, p.water_level - 1.0 / gains[i]));
    }
    const double scale = std::max(1.0, p_t_);
    add("waterfill_kkt",
        nonneg && std::abs(sum - p_t_) <= 1e-9 * scale && kkt <= 1e-9 * std::max(scale, p.water_level),
        "power sum error " + num(sum - p_t_) + ", KKT residual " + num(kkt));
  }

  std::vector<Grouping> sample_groupings(std::size_t g) {
    const std::size_t n = h_.n_users();
    const std::uint64_t count = grouping_count(n, g);
    if (count <= 200) return enumerate_groupings(n, g, count);
    std::vector<Grouping> out;
    for (std::uint64_t i = 0; i < 50; ++i)
      out.push_back(random_grouping(n, g, {derive_seed(seed_, kVerifySamplePurpose + g), i}));
    return out;
  }

  void check_group_size(std::size_t g) {
    const std::size_t n = h_.n_users();
    const std::string tag = "_g" + std::to_string(g);
    if (g == 0 || n % g != 0) {
      add("group_size" + tag, false, "group size does not divide N_u");
      return;
    }
    const RateReport zf = zf_sum_rate(h_, p_t_);
    const auto groupings = sample_groupings(g);
    const GramInverseCache cache(h_);
    const double hscale = std::max(1.0, h_.matrix().max_abs());

    std::size_t rate_viol = 0;
    std::size_t gain_viol = 0;
    double leak = 0.0;
    double fast_diff = 0.0;
    double proj_err = 0.0;
    for (const auto& grp : groupings) {
      const RateReport r = sum_rate_opt_power(h_, p_t_, grp);
      if (r.sum_rate < zf.sum_rate - 1e-9) ++rate_viol;
      for (std::size_t i = 0; i < n; ++i)
        if (r.gains[i] < zf.gains[i] * (1.0 - 1e-9)) ++gain_viol;
      leak = std::max(leak, residual_interference(h_, grp));
      for (std::size_t k = 0; k < grp.n_groups(); ++k) {
        const CMatrix rq = effective_channel(h_, grp, k).r;
        const CMatrix rf = effective_r_fast(cache, grp, k);
        fast_diff = std::max(fast_diff, max_rel_diff(rf, rq));
      }
      const CMatrix pr = complement_projector(h_, grp, 0);
      proj_err = std::max(proj_err, max_abs_diff(pr * pr, pr));
    }
    const std::string over = " over " + std::to_string(groupings.size()) + " groupings";
    add("grouped_rate_at_least_zf" + tag, rate_viol == 0,
        std::to_string(rate_viol) + " violations" + over);
    add("grouped_gains_dominate_zf" + tag, gain_viol == 0,
        std::to_string(gain_viol) + " violations" + over);
    add("inter_group_nulling" + tag, leak <= 1e-8 * hscale, "max leakage " + num(leak));
    add("projector_idempotent" + tag, proj_err <= 1e-8, "max |P^2 - P| " + num(proj_err));
    add("fastpath_matches_qr" + tag, fast_diff <= 1e-8, "max rel diff " + num(fast_diff));

    const SearchResult jp = jpauga(h_, p_t_, g, {});
    bool mono = true;
    for (std::size_t i = 1; i < jp.rate_trace.size(); ++i)
      mono = mono && jp.rate_trace[i] >= jp.rate_trace[i - 1] - 1e-9;
    add("jpauga_trace_nondecreasing" + tag, mono,
        std::to_string(jp.rate_trace.size()) + " iterations");

    bool sandwich = jp.sum_rate >= zf.sum_rate - 1e-9;
    std::string detail = "zf " + num(zf.sum_rate) + " <= jpauga " + num(jp.sum_rate);
    if (grouping_count(n, g) <= budget_) {
      const SearchResult bf = brute_force_optimal(h_, p_t_, g, budget_);
      sandwich = sandwich && jp.sum_rate <= bf.sum_rate + 1e-9;
      detail += " <= brute " + num(bf.sum_rate);
    } else {
      detail += " (brute force over budget, upper side skipped)";
    }
    add("zf_jpauga_brute_sandwich" + tag, sandwich, detail);
  }

  const ChannelMatrix& h_;
  double p_t_;
  std::uint64_t seed_;
  std::uint64_t budget_;
  std::vector<Check> checks_;
};

int cmd_verify(const Options& o, std::ostream& out) {
  const ChannelMatrix h = load_source(o);
  const double p_t = power_from_db(o.snr_db);
  std::vector<std::size_t> sizes;
  if (o.g_given) {
    sizes.push_back(o.g);
  } else {
    for (std::size_t g = 1; g <= h.n_users(); ++g)
      if (h.n_users() % g == 0) sizes.push_back(g);
  }
  const auto checks = Verifier(h, p_t, o.seed, o.budget).run(sizes);

  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  std::string text;
  if (o.format == "json") {
    ojson j = instance_json(h, p_t, o.snr_db);
    ojson arr = ojson::array();
    for (const auto& c : checks) arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = std::move(arr);
    j["pass"] = all;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "check,pass,detail\n";
    for (const auto& c : checks)
      os << c.name << ',' << (c.pass ? "true" : "false") << ",\"" << c.detail << "\"\n";
    text = os.str();
  }
  emit(o, out, text);
  return all ? kExitOk : kExitVerifyFailed;
}

// ---- channel / gap -----------------------------------------------------------

int cmd_channel(const Options& o, std::ostream& out) {
  const ChannelMatrix h = load_source(o);
  if (o.format == "json") {
    emit(o, out, channel_to_json(h) + "\n");
    return kExitOk;
  }
  std::ostringstream os;
  os << "row,col,re,im\n";
  const CMatrix& m = h.matrix();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      os << r + 1 << ',' << c + 1 << ',' << num(m(r, c).real()) << ',' << num(m(r, c).imag()) << '\n';
  emit(o, out, os.str());
  return kExitOk;
}

int cmd_gap(const Options& o, std::ostream& out) {
  const double p_t = power_from_db(o.snr_db);
  const GapResult gr = gap_closed_form(p_t, o.n_u);
  ojson j;
  j["n_u"] = o.n_u;
  j["snr_db"] = o.snr_db;
  j["p_t"] = p_t;
  j["closed_form"] = gr.closed_form;
  j["lower_bound"] = gr.lower_bound;
  j["upper_bound"] = gr.upper_bound;
  j["asymptote"] = static_cast<double>(o.n_u) / 2.0 * std::log2(std::exp(1.0));
  j["snr_gap_db"] = snr_gap_db(o.n_u);
  if (o.trials > 0) {
    const GapEstimate mc = monte_carlo_gap(o.n_u, p_t, o.trials, o.seed);
    j["monte_carlo_trials"] = mc.trials;
    j["monte_carlo_mean"] = mc.mean;
    j["monte_carlo_std_error"] = mc.std_error;
  }
  emit(o, out, render(o, j));
  return kExitOk;
}

// ---- option wiring -----------------------------------------------------------

void add_source(CLI::App* app, Options& o) {
  app->add_option("--channel", o.channel_path, "Channel JSON file");
  app->add_flag("--builtin-hex", o.builtin_hex, "Built-in 6x6 example channel");
  app->add_option("--rayleigh", o.rayleigh, "Rayleigh channel with NU users and NT antennas")
      ->expected(2)
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "Master seed");
}

void add_output(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", o.out_path, "Output file (default: stdout)");
}

void add_search(CLI::App* app, Options& o) {
  app->add_option("--max-itr", o.max_itr, "JPAUGA iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--rel-threshold", o.rel_threshold, "JPAUGA relative stopping threshold")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--budget", o.budget, "Brute-force enumeration budget");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"User-grouping precoder toolkit", "groupcast"};
  app.require_subcommand(1);

  auto* rate = app.add_subcommand("rate", "Sum rate of one scheme on one channel");
  add_source(rate, o);
  rate->add_option("--snr-db", o.snr_db, "Transmit SNR in dB");
  rate->add_option("--scheme", o.scheme, "Scheme")
      ->check(CLI::IsMember({"zf", "random", "guga", "jpauga", "brute", "zfdp"}));
  rate->add_option("--grouping", o.grouping, "Explicit grouping, e.g. [[1,2],[3,4]]");
  rate->add_option("--g", o.g, "Group size")->check(CLI::PositiveNumber);
  add_search(rate, o);
  add_output(rate, o);

  auto* group = app.add_subcommand("group", "Search for a grouping");
  add_source(group, o);
  group->add_option("--snr-db", o.snr_db, "Transmit SNR in dB");
  group->add_option("--algo", o.algo, "Search algorithm")
      ->check(CLI::IsMember({"guga", "jpauga", "brute"}));
  group->add_option("--g", o.g, "Group size")->check(CLI::PositiveNumber);
  add_search(group, o);
  add_output(group, o);

  auto* mc = app.add_subcommand("montecarlo", "Rate distribution over Rayleigh channels");
  mc->add_option("--rayleigh", o.rayleigh, "Users and antennas (default 6 6)")
      ->expected(2)
      ->check(CLI::PositiveNumber);
  mc->add_option("--seed", o.seed, "Master seed");
  mc->add_option("--snr-db", o.snr_db, "Transmit SNR in dB");
  mc->add_option("--scheme", o.scheme, "Scheme")
      ->check(CLI::IsMember({"zf", "random", "guga", "jpauga", "brute", "zfdp"}));
  mc->add_option("--g", o.g, "Group size")->check(CLI::PositiveNumber);
  mc->add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);
  mc->add_option("--below", o.below, "Threshold for the reported P(rate < x)");
  add_search(mc, o);
  add_output(mc, o);

  auto* verify = app.add_subcommand("verify", "Check invariants on one channel");
  add_source(verify, o);
  verify->add_option("--snr-db", o.snr_db, "Transmit SNR in dB");
  verify->add_option("--g", o.g, "Only this group size (default: every divisor of N_u)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--budget", o.budget, "Brute-force enumeration budget");
  add_output(verify, o);

  auto* channel = app.add_subcommand("channel", "Print a channel matrix");
  add_source(channel, o);
  add_output(channel, o);

  auto* gap = app.add_subcommand("gap", "Ergodic gap of random pairing over zero forcing");
  gap->add_option("--n-u", o.n_u, "Number of users (even)");
  gap->add_option("--snr-db", o.snr_db, "Transmit SNR in dB");
  gap->add_option("--trials", o.trials, "Monte Carlo trials (0 skips the estimate)");
  gap->add_option("--seed", o.seed, "Master seed");
  add_output(gap, o);

  std::vector<std::string> argv_store{"groupcast"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*verify) o.g_given = verify->count("--g") > 0;
    if (*rate) return cmd_rate(o, out);
    if (*group) return cmd_group(o, out);
    if (*mc) return cmd_montecarlo(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*channel) return cmd_channel(o, out);
    if (*gap) return cmd_gap(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace groupcast
