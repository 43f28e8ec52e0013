#pragma once

#include <cstddef>
#include <functional>

namespace gscnoma {

/// Environment variable that overrides the default worker count.
inline constexpr const char* kWorkersEnv = "GSCNOMA_WORKERS";

/// GSCNOMA_WORKERS when set to a positive integer, else the hardware
/// concurrency (at least 1). Throws ConfigError for a malformed value.
std::size_t default_worker_count();

/// Runs body(i) for i in [0, count) on `workers` threads (0 = default).
/// Indices are claimed dynamically. After a failure no new indices start;
/// the exception from the lowest failing index is rethrown once all
/// workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

}  // namespace gscnoma
