#pragma once

#include <cstddef>
#include <functional>

namespace sobext {

/// Worker count for parallel stages. Defaults to SOBEXT_THREADS, else 1.
int thread_count();
void set_thread_count(int n);

/// Calls body(k) for k in [0, n) across thread_count() workers. Each index
/// is visited exactly once; callers that write results per index and reduce
/// afterwards get output independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sobext
