#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace catq::detail {

// Evaluate fn(0..count-1) into a vector with a deterministic ordered merge:
// the result is identical for any worker count. The first failing index's
// exception is rethrown after all workers join.
template <typename T>
std::vector<T> parallel_map(int count, int workers, const std::function<T(int)>& fn) {
    std::vector<T> results(static_cast<size_t>(count));
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) results[static_cast<size_t>(i)] = fn(i);
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    results[static_cast<size_t>(i)] = fn(i);
                } catch (...) {
                    errors[static_cast<size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

} // namespace catq::detail
