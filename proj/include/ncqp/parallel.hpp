#pragma once

#include <cstddef>
#include <functional>

namespace ncqp {

/// Upper bound on worker threads (0 = hardware concurrency).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Calls body(i) for i in [0, count) on up to max_threads() workers.
/// Each index is visited exactly once; results must be written to per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace ncqp
