#include "reprometa/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace reprometa {

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t, int)>& f) {
  const int n_workers = resolve_workers(workers);
  if (count == 0) return;
  if (n_workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i, 0);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&](int worker_id) {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i, worker_id);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  const int spawn = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(n_workers)));
  threads.reserve(spawn);
  for (int w = 0; w < spawn; ++w) threads.emplace_back(run, w);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace reprometa
