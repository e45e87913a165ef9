#pragma once

#include <cstddef>
#include <functional>

namespace ppx {

// Worker count used by replication loops.  1 (the default) runs inline.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for every i in [0, n), partitioned into contiguous blocks per
// worker.  fn must confine writes to per-i slots; estimators then reduce the
// slots sequentially, which keeps results identical for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ppx
