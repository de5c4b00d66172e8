#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace flexagg {

/// Resolves a worker count; values <= 0 mean one worker per hardware thread.
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Calls fn(i) for i in [0, count) on contiguous shards. fn must only write
/// to slot i of preallocated storage so the result is independent of the
/// shard layout. The first exception thrown by any shard is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const std::size_t n_workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        const std::size_t chunk = (count + n_workers - 1) / n_workers;
        for (std::size_t w = 0; w < n_workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace flexagg
