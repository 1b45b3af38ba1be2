#include "parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace circleflow::detail {

int thread_count() {
  if (const char* env = std::getenv("CIRCLEFLOW_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested > 0) return requested;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t min_parallel,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(thread_count());
  if (n < min_parallel || workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  const std::size_t chunks = std::min(workers, n);
  const std::size_t per = (n + chunks - 1) / chunks;

  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * per;
    const std::size_t end = std::min(n, begin + per);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace circleflow::detail
