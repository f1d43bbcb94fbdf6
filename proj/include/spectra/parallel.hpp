// Deterministic parallel map-reduce plumbing. Per-sample work is indexed and
// written into a preallocated buffer, so any worker count produces the same
// values; reductions then run sequentially in index order with compensated
// summation. Worker count defaults to the SPECTRA_WORKERS environment
// variable, then to the hardware concurrency.

#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace spectra {

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) noexcept {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    [[nodiscard]] double value() const noexcept { return sum; }
};

/// Worker count resolution: an explicit request wins, then SPECTRA_WORKERS,
/// then the hardware concurrency; always at least 1.
inline int resolve_workers(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPECTRA_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w > 0) return w;
        } catch (const std::exception&) {
            // Unparsable values fall through to the hardware default.
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs body(i) for i in [0, count) across the given number of workers.
/// body must only touch per-index state; the first exception thrown by any
/// worker is rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace spectra
