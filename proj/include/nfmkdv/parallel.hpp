#pragma once

#include <cstddef>
#include <functional>

namespace nfmkdv {

// Worker cap for the per-frequency loops. Defaults to NF_MKDV_THREADS when
// set, otherwise 1.
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [begin, end). Indices are split into contiguous
// fixed blocks, one per worker, so the work assigned to each index (and
// hence every floating-point reduction) is independent of the thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace nfmkdv
