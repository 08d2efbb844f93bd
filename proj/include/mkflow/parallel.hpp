#pragma once
#include <thread>
#include <vector>
#include <functional>
#include <cstddef>

namespace mkflow {

// Deterministic data parallelism: workers fill disjoint index ranges and all
// reductions happen afterwards in a single fixed-order pass, so results are
// bit-identical for any worker count.
inline int& worker_count() {
    static int n = 1;
    return n;
}

template <class Fn>
inline void parallel_for(std::size_t count, Fn&& fn, int workers = 0) {
    if (workers <= 0) workers = worker_count();
    if (workers <= 1 || count < 2048) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace mkflow
