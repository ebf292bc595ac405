#pragma once

#include <cstddef>
#include <functional>

namespace reconet {

/// Worker cap from RECONET_THREADS, else hardware concurrency (at least 1).
/// Malformed values are ignored.
std::size_t worker_count();

/// Runs body(k) for k in [0, count) on up to worker_count() threads. Every
/// index is visited exactly once; callers write only to slots owned by k, so
/// results do not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace reconet
