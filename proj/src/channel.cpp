// SPDX-License-Identifier: Apache-2.0
#include "groupcast/channel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "groupcast/errors.hpp"

namespace groupcast {

ChannelMatrix::ChannelMatrix(CMatrix matrix, const Tolerances& tol) : matrix_(std::move(matrix)) {
  const std::size_t nu = matrix_.rows();
  const std::size_t nt = matrix_.cols();
  if (nu < 1 || nt < nu) {
    throw BadDimensions("need N_t >= N_u >= 1, got N_u=" + std::to_string(nu) +
                        " N_t=" + std::to_string(nt));
  }
  if (!matrix_.all_finite()) throw ParseError("channel has non-finite entries");
  const auto sv = singular_values(matrix_);
  if (sv.front() == 0.0 || sv.back() <= tol.rank_rel * sv.front()) {
    throw RankDeficient("channel matrix is not full row rank");
  }
}

std::uint64_t ChannelMatrix::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001B3ULL;
    }
  };
  const std::uint64_t dims[2] = {matrix_.rows(), matrix_.cols()};
  feed(dims, sizeof dims);
  for (const auto& z : matrix_.data()) {
    const double parts[2] = {z.real(), z.imag()};
    feed(parts, sizeof parts);
  }
  return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

ChannelMatrix builtin_hex() {
  const double h = 0.5;
  const double s = 1.0 / std::sqrt(2.0);
  return ChannelMatrix(CMatrix::from_rows({
      {h, 0, 0, -h, s, 0},
      {0, h, -s, h, 0, 0},
      {0, -h, 0, 0, -s, h},
      {-h, 0, 0, s, 0, -h},
      {h, 0, s, 0, h, 0},
      {0, 0, 0, -s, -h, h},
  }));
}

ChannelMatrix rayleigh(std::size_t n_users, std::size_t n_tx, RngSeed seed) {
  if (n_users < 1 || n_tx < n_users) {
    throw BadDimensions("rayleigh needs n_tx >= n_users >= 1");
  }
  StreamRng rng(seed);
  CMatrix m(n_users, n_tx);
  for (std::size_t i = 0; i < n_users; ++i)
    for (std::size_t j = 0; j < n_tx; ++j) m(i, j) = rng.complex_normal();
  return ChannelMatrix(std::move(m));
}

std::string channel_to_json(const ChannelMatrix& h) {
  nlohmann::json rows = nlohmann::json::array();
  const CMatrix& m = h.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  nlohmann::json doc;
  doc["n_users"] = h.n_users();
  doc["n_tx"] = h.n_tx();
  doc["entries"] = std::move(rows);
  return doc.dump();
}

ChannelMatrix channel_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object() || !doc.contains("n_users") || !doc.contains("n_tx") ||
      !doc.contains("entries")) {
    throw ParseError("expected keys n_users, n_tx, entries");
  }
  if (!doc["n_users"].is_number_integer() || !doc["n_tx"].is_number_integer()) {
    throw ParseError("n_users and n_tx must be integers");
  }
  const auto nu = doc["n_users"].get<long long>();
  const auto nt = doc["n_tx"].get<long long>();
  const auto& entries = doc["entries"];
  if (nu < 1 || nt < 1) throw ParseError("dimensions must be positive");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(nu)) {
    throw ParseError("entries must hold n_users rows");
  }
  std::vector<cplx> data;
  data.reserve(static_cast<std::size_t>(nu * nt));
  for (const auto& row : entries) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(nt)) {
      throw ParseError("every row must hold n_tx entries");
    }
    for (const auto& z : row) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw ParseError("entries must be [re, im] pairs");
      }
      data.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
  }
  if (nt < nu) throw BadDimensions("file has N_t < N_u");
  return ChannelMatrix(CMatrix(static_cast<std::size_t>(nu), static_cast<std::size_t>(nt),
                               std::move(data)));
}

void save_channel(const ChannelMatrix& h, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << channel_to_json(h) << '\n';
}

ChannelMatrix load_channel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return channel_from_json(ss.str());
}

}  // namespace groupcast
