#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gsv {

/// Worker count: GSV_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, count).
/// Callers write per-index results and reduce them in index order afterwards,
/// which keeps every result independent of the thread count.
/// grain is the smallest chunk worth a thread.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t grain = 256) {
    const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(count / grain, 1));
    if (workers <= 1) {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace gsv
