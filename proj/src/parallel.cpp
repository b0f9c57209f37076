#include "nfmkdv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace nfmkdv {
namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("NF_MKDV_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Set inside worker blocks so that nested loops run serially on the caller.
thread_local bool inside_parallel_region = false;

std::atomic<int>& thread_setting() {
  static std::atomic<int> setting{initial_thread_count()};
  return setting;
}

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int n) { thread_setting().store(std::max(1, n)); }

void parallel_for(int begin, int end, const std::function<void(int)>& body) {
  const int total = end - begin;
  if (total <= 0) return;
  const int workers = inside_parallel_region ? 1 : std::min(thread_count(), total);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + static_cast<int>(static_cast<long long>(total) * w / workers);
    const int hi = begin + static_cast<int>(static_cast<long long>(total) * (w + 1) / workers);
    pool.emplace_back([&, lo, hi] {
      inside_parallel_region = true;
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace nfmkdv
