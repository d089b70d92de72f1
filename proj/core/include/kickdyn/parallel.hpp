#pragma once

#include <cstddef>
#include <functional>

namespace kickdyn {

/// Name of the environment variable overriding the worker-thread count.
inline constexpr const char* kThreadsEnvVar = "KICKDYN_THREADS";

/// requested > 0 wins; otherwise KICKDYN_THREADS; otherwise hardware concurrency.
[[nodiscard]] unsigned resolve_thread_count(unsigned requested = 0);

/// Runs job(i) for i in [0, jobs) on up to `threads` workers. Jobs must write
/// only to their own slot; the first exception thrown is rethrown here.
void parallel_for(std::size_t jobs, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace kickdyn
