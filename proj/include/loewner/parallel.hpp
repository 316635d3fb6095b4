#pragma once

// Deterministic data parallelism: every index is processed exactly once and
// results are written to caller-owned slots, so reductions done afterwards in
// index order do not depend on the worker count. LOEWNER_LAB_THREADS caps the
// number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace loewner {

inline std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("LOEWNER_LAB_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
    }
    return n;
}

/// Runs body(i) for i in [0, count). If any call throws, the exception of the
/// lowest failing index is rethrown after all indices have been visited.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min(worker_count(), count);
    std::size_t first_error = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;
    std::mutex error_mutex;
    auto record = [&](std::size_t i, std::exception_ptr e) {
        std::lock_guard lock(error_mutex);
        if (i < first_error) {
            first_error = i;
            error = std::move(e);
        }
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                body(i);
            } catch (...) {
                record(i, std::current_exception());
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto run = [&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    record(i, std::current_exception());
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
        run();
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace loewner
