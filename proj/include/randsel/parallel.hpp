#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace randsel {

// Runs body(i) for i in [0, n) on a small thread pool. Work is claimed by
// index, so callers that write results into slot i get deterministic output.
// The exception from the lowest failing index is rethrown.
template <class Body>
void parallel_for(int n, Body&& body, int workers = 0) {
  if (n <= 0) return;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace randsel
