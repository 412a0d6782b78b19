// SPDX-License-Identifier: Apache-2.0
//
// Minimal index-parallel loop. Work is split by index, each index writes
// only its own output slot, so results do not depend on the worker count.
#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace groupcast {

/// Worker count: GROUPCAST_THREADS if set to a positive integer, else
/// the hardware concurrency (at least 1).
inline std::size_t default_workers() {
  if (const char* env = std::getenv("GROUPCAST_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls body(i) for i in [0, n) on up to `workers` threads (0 = default).
/// If any call throws, the exception from the smallest failing index is
/// rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, std::size_t workers = 0) {
  if (workers == 0) workers = default_workers();
  if (workers > n) workers = n;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> fail_index(workers, kNone);
  std::vector<std::exception_ptr> fail(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          fail_index[w] = i;
          fail[w] = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  std::size_t first = kNone;
  std::size_t who = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    if (fail_index[w] < first) {
      first = fail_index[w];
      who = w;
    }
  }
  if (first != kNone) std::rethrow_exception(fail[who]);
}

}  // namespace groupcast
