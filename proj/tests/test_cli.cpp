// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "groupcast/channel.hpp"
#include "groupcast/cli.hpp"

using namespace groupcast;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("groupcast_cli_" + name);
}

}  // namespace

TEST_CASE("rate command on the built-in channel") {
  const auto r = run({"rate", "--builtin-hex", "--snr-db", "10", "--scheme", "zf"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["sum_rate"].get<double>() > 0.0);
  CHECK(j["per_user_rates"].size() == 6);
  CHECK(j["residual_interference"].get<double>() < 1e-10);

  const auto b = run({"rate", "--builtin-hex", "--snr-db", "10", "--scheme", "brute", "--g", "2"});
  REQUIRE(b.code == 0);
  CHECK(nlohmann::json::parse(b.out)["sum_rate"].get<double>() > j["sum_rate"].get<double>());

  const auto f = run({"rate", "--builtin-hex", "--snr-db", "10", "--grouping", "[[2,5],[3,1],[4,6]]"});
  REQUIRE(f.code == 0);
  CHECK(nlohmann::json::parse(f.out)["scheme"] == "fixed");
}

TEST_CASE("rate command is deterministic") {
  const std::vector<std::string> args = {"rate", "--rayleigh", "6", "6", "--seed", "7", "--snr-db", "10", "--scheme", "zf"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> csv = {"rate", "--rayleigh", "6", "6", "--seed", "7", "--scheme", "jpauga", "--format", "csv"};
  const auto c = run(csv);
  CHECK(c.code == 0);
  CHECK(c.out.rfind("key,value\n", 0) == 0);
  CHECK(c.out == run(csv).out);
}

TEST_CASE("group command") {
  const auto r = run({"group", "--builtin-hex", "--snr-db", "29", "--g", "2", "--algo", "jpauga", "--max-itr", "1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["grouping"] == nlohmann::json::parse("[[2,5],[3,1],[4,6]]"));
  CHECK(j["rate_trace"].size() == 1);

  const std::vector<std::string> base = {"group", "--rayleigh", "8", "8", "--seed", "3", "--g", "2"};
  auto guga_args = base;
  guga_args.insert(guga_args.end(), {"--algo", "guga"});
  auto jp_args = base;
  jp_args.insert(jp_args.end(), {"--algo", "jpauga", "--max-itr", "1"});
  CHECK(nlohmann::json::parse(run(guga_args).out)["grouping"] ==
        nlohmann::json::parse(run(jp_args).out)["grouping"]);
}

TEST_CASE("brute force over budget exits with a config error") {
  const auto r = run({"group", "--rayleigh", "12", "12", "--algo", "brute", "--g", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("BudgetExceeded") != std::string::npos);
}

TEST_CASE("montecarlo writes samples and summary") {
  const auto out = tmp("mc.csv");
  const auto r = run({"montecarlo", "--trials", "10", "--scheme", "zf", "--seed", "4", "--format", "csv",
                      "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto samples = slurp(out);
  std::size_t lines = 0;
  for (char c : samples) lines += c == '\n';
  CHECK(lines == 11);
  CHECK(samples.rfind("trial,scheme,sum_rate_bpcu,channel_fingerprint\n", 0) == 0);
  const auto summary = slurp(out.string() + ".summary.csv");
  CHECK(summary.find("prob_below,") != std::string::npos);

  const auto out2 = tmp("mc2.csv");
  run({"montecarlo", "--trials", "10", "--scheme", "jpauga", "--seed", "4", "--format", "csv", "--out",
       out2.string()});
  const auto fps = [](const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) v.push_back(line.substr(line.rfind(',') + 1));
    return v;
  };
  CHECK(fps(samples) == fps(slurp(out2)));
  std::filesystem::remove(out);
  std::filesystem::remove(out2);
  std::filesystem::remove(out.string() + ".summary.csv");
  std::filesystem::remove(out2.string() + ".summary.csv");
}

TEST_CASE("verify command") {
  const auto r = run({"verify", "--builtin-hex"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["pass"] == true);

  const auto r8 = run({"verify", "--rayleigh", "8", "8", "--seed", "2", "--format", "csv"});
  CHECK(r8.code == 0);
  CHECK(r8.out.find("zf_jpauga_brute_sandwich_g4,true") != std::string::npos);

  const auto bad = tmp("dup.json");
  {
    std::ofstream f(bad);
    f << R"({"n_users":2,"n_tx":2,"entries":[[[1,0],[2,0]],[[1,0],[2,0]]]})";
  }
  const auto d = run({"verify", "--channel", bad.string()});
  CHECK(d.code == 3);
  CHECK(d.err.find("RankDeficient") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("channel and gap commands") {
  const auto c = run({"channel", "--builtin-hex"});
  REQUIRE(c.code == 0);
  CHECK(channel_from_json(c.out) == builtin_hex());
  const auto g = run({"gap", "--n-u", "6", "--snr-db", "20", "--trials", "100"});
  REQUIRE(g.code == 0);
  const auto j = nlohmann::json::parse(g.out);
  CHECK(j["lower_bound"].get<double>() < j["closed_form"].get<double>());
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"rate"}).code == 2);
  CHECK(run({"rate", "--builtin-hex", "--scheme", "nope"}).code == 2);
  CHECK(run({"rate", "--builtin-hex", "--rayleigh", "2", "2"}).code == 2);
  CHECK(run({"rate", "--builtin-hex", "--scheme", "jpauga", "--g", "4"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
