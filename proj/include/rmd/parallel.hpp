#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace rmd {

// Worker cap: RMD_THREADS if set (minimum 1), else the hardware count.
inline std::size_t thread_budget() {
    if (const char* env = std::getenv("RMD_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) return static_cast<std::size_t>(parsed);
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Run fn(i) for i in [0, count). Results must be written into preallocated
// per-index slots by the callable; chunks are contiguous so no two workers
// touch the same index. Falls back to a plain loop for small counts.
template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
    const std::size_t workers = std::min(thread_budget(), count);
    if (workers <= 1 || count < 4) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([fn, lo, hi, w, &errors] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace rmd
