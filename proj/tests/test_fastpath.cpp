// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "groupcast/channel.hpp"
#include "groupcast/errors.hpp"
#include "groupcast/fastpath.hpp"
#include "groupcast/powalloc.hpp"
#include "groupcast/precoder.hpp"

using namespace groupcast;

TEST_CASE("cache of simple channels") {
  const GramInverseCache id(ChannelMatrix(CMatrix::identity(3)));
  CHECK(max_abs_diff(id.hhh_inv(), CMatrix::identity(3)) < 1e-15);
  const GramInverseCache d(ChannelMatrix(CMatrix::from_rows({{2, 0}, {0, 3}})));
  CHECK(max_abs_diff(d.hhh_inv(), CMatrix::from_rows({{0.25, 0}, {0, 1.0 / 9}})) < 1e-15);

  const auto h = builtin_hex();
  const auto cache = build_cache(h);
  const auto zf = zf_gains(h);
  for (std::size_t i = 0; i < 6; ++i) CHECK(1.0 / cache.hhh_inv()(i, i).real() == doctest::Approx(zf[i]));
  const CMatrix& m = h.matrix();
  CHECK(max_abs_diff(m * m.adjoint() * cache.hhh_inv(), CMatrix::identity(6)) < 1e-10);
  CHECK(cache.hhh_inv() == cache.hhh_inv().adjoint());
}

TEST_CASE("fast R of the (U1, U5) pair") {
  const auto cache = build_cache(builtin_hex());
  const std::size_t users[] = {0, 4};
  const CMatrix r = effective_r_fast(cache, users);
  CHECK(std::abs(r(0, 0) - cplx(fixtures::kR11)) <= 0.001);
  CHECK(std::abs(r(0, 1) - cplx(fixtures::kR12)) <= 0.001);
  CHECK(std::abs(r(1, 1) - cplx(fixtures::kR22)) <= 0.001);
}

TEST_CASE("single-user fast R is the inverse root of the cache diagonal") {
  const auto h = rayleigh(6, 6, {4, 0});
  const auto cache = build_cache(h);
  for (std::size_t j = 0; j < 6; ++j) {
    const std::size_t u[] = {j};
    CHECK(effective_r_fast(cache, u)(0, 0).real() ==
          doctest::Approx(1.0 / std::sqrt(cache.hhh_inv()(j, j).real())).epsilon(1e-12));
  }
}

TEST_CASE("fast path matches the QR path") {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const std::size_t g = 1 + s % 3;
    const std::size_t nu = g * (2 + s % 2);
    const auto h = rayleigh(nu, nu + s % 3, {s, 11});
    const auto grouping = random_grouping(nu, g, {s, 12});
    const std::size_t k = s % grouping.n_groups();
    const auto cache = build_cache(h);
    const auto ref = effective_channel(h, grouping, k);
    CHECK(max_rel_diff(effective_r_fast(cache, grouping, k), ref.r) < 1e-8);
    CHECK(max_abs_diff(beamformer_fast(h, cache, grouping, k), ref.q) < 1e-8);
  }
}

TEST_CASE("fast beamformers null the other groups") {
  const auto h = builtin_hex();
  const auto cache = build_cache(h);
  const auto grouping = Grouping::from_one_based({{2, 5}, {3, 1}, {4, 6}});
  for (std::size_t k = 0; k < 3; ++k) {
    const CMatrix q = beamformer_fast(h, cache, grouping, k);
    for (std::size_t i = 0; i < 3; ++i)
      if (i != k) CHECK((h.matrix().select_rows(grouping.groups[i]) * q).max_abs() < 1e-10);
  }
  const ChannelMatrix id(CMatrix::identity(4));
  const CMatrix q = beamformer_fast(id, build_cache(id), Grouping::from_one_based({{1, 2}, {3, 4}}), 0);
  CHECK(max_abs_diff(q, CMatrix::identity(4).select_cols(std::vector<std::size_t>{0, 1})) < 1e-15);
}

TEST_CASE("stale cache is detected") {
  const auto cache = build_cache(rayleigh(4, 4, {1, 0}));
  CHECK_THROWS_AS(beamformer_fast(rayleigh(4, 4, {1, 1}), cache, Grouping::singletons(4), 0), StaleCache);
}

TEST_CASE("rank-deficient channels are rejected") {
  const CMatrix m = CMatrix::from_rows({{1, 0, 0}, {0, 1, 0}});
  CHECK_NOTHROW(build_cache(ChannelMatrix(m)));
  CHECK_THROWS_AS(ChannelMatrix(CMatrix::from_rows({{1, 1}, {1, 1}})), RankDeficient);
}
