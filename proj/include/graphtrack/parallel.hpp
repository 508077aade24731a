#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace graphtrack {

/// Worker count for `requested` (0 means hardware concurrency), capped by the work size.
inline std::size_t worker_count(std::size_t requested, std::size_t work) {
    std::size_t n = requested != 0 ? requested : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, work));
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots. The exception of the lowest failing index is
/// rethrown, so failures do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (count == 0) {
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = worker_count(threads, count);
    if (n == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n - 1);
        for (std::size_t t = 1; t < n; ++t) {
            pool.emplace_back(work);
        }
        work();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace graphtrack
