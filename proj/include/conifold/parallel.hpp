#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace conifold {

// --jobs default: CONIFOLD_LAB_JOBS, else hardware concurrency
inline int default_jobs() {
  if (const char* env = std::getenv("CONIFOLD_LAB_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Dynamic scheduling over [0, n); the body writes to its own slot, so the
// result is independent of the execution order.  jobs <= 1 runs inline.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
  if (n == 0) return;
  if (jobs <= 0) jobs = default_jobs();
  if (jobs == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  int nt = jobs < static_cast<int>(n) ? jobs : static_cast<int>(n);
  pool.reserve(nt);
  for (int k = 0; k < nt; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace conifold
