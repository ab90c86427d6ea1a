#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "rlab/error.hpp"
#include "rlab/rng.hpp"

namespace rlab {

/// Runs fn(index, seed) for index in [0, trials) on `jobs` threads, with
/// seed = derive_seed(master, index). Results are stored by index, so the
/// output does not depend on the thread count. The first exception thrown
/// by any trial is rethrown after all workers stop.
template <class Result, class Fn>
std::vector<Result> run_trials(int trials, std::uint64_t master_seed, int jobs, Fn&& fn) {
  require(trials >= 0, Errc::bad_params, "trial count must be non-negative");
  require(jobs >= 1, Errc::bad_params, "jobs must be at least 1");
  std::vector<Result> out(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= trials || stop.load()) return;
      try {
        out[static_cast<std::size_t>(k)] = fn(k, derive_seed(master_seed, static_cast<std::uint64_t>(k)));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  const int threads = std::min(jobs, std::max(trials, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace rlab
