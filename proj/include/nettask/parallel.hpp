#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nettask {

// Worker count from NETTASK_WORKERS, else hardware concurrency.
unsigned default_workers();

// Runs fn(begin, end) over contiguous chunks of [0, n). Results must be
// written to per-index slots so the outcome is independent of `workers`.
// The first exception thrown by any worker is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (n == 0) return;
    workers = std::max(1u, workers);
    if (workers == 1 || n == 1) {
        fn(std::size_t{0}, n);
        return;
    }
    // Interleaved small chunks balance skewed per-item cost.
    const std::size_t chunk = std::max<std::size_t>(1, n / (std::size_t{workers} * 8));
    std::size_t next = 0;
    std::mutex mu;
    std::exception_ptr error;
    auto body = [&] {
        for (;;) {
            std::size_t begin;
            {
                std::lock_guard lock(mu);
                if (next >= n || error) return;
                begin = next;
                next = std::min(n, next + chunk);
            }
            try {
                fn(begin, std::min(n, begin + chunk));
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, (n + chunk - 1) / chunk));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(body);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace nettask
