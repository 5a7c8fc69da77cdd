#include "chainrt/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace chainrt {

namespace {
std::atomic<unsigned> g_jobs{1};
}

void set_jobs(unsigned jobs) { g_jobs = jobs == 0 ? 1 : jobs; }
unsigned jobs() { return g_jobs; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = unsigned(std::min<std::size_t>(g_jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace chainrt
