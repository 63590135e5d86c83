#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dimreader {

/// Worker count: DIMREADER_THREADS when set, hardware concurrency
/// otherwise. Every parallel loop in this library writes task-indexed
/// slots and reduces in index order afterwards, so results never depend
/// on this number.
inline int default_thread_count() {
  if (const char* env = std::getenv("DIMREADER_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(0..count-1) on up to `threads` workers (0 = default). Tasks
/// are claimed from a shared counter; the first exception is rethrown
/// on the caller after all workers join.
inline void parallel_for(int count, const std::function<void(int)>& fn, int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::mutex mutex;
  int next = 0;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      int task;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (failure || next >= count) return;
        task = next++;
      }
      try {
        fn(task);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dimreader
