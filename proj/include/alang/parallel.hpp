#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace alang {

// Runs fn(i) for i in [0, n) on `threads` workers, stealing fixed-size
// chunks off a shared counter. Results must be written to disjoint slots so
// the schedule cannot affect the output.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn,
                         long chunk = 16) {
    if (threads <= 1 || n <= chunk) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next(0);
    auto worker = [&]() {
        for (;;) {
            const long start = next.fetch_add(chunk);
            if (start >= n) return;
            const long stop = std::min(start + chunk, n);
            for (long i = start; i < stop; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace alang
