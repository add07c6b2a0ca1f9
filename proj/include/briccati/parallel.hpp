#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace briccati {

/// Runs fn(i) for i in [0, count) on at most `thread_budget` threads with
/// static contiguous chunks of ceil(count / threads). fn must only touch
/// slot i of its outputs. The first exception thrown by any chunk is
/// rethrown after all threads join.
template <typename Fn>
void ParallelFor(int count, int thread_budget, Fn&& fn) {
  if (count <= 0) return;
  const int threads = std::clamp(thread_budget, 1, count);
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int chunk = (count + threads - 1) / threads;
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  auto run = [&](int t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    try {
      for (int i = begin; i < end; ++i) fn(i);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  for (int t = 1; t < threads; ++t) pool.emplace_back(run, t);
  run(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace briccati
