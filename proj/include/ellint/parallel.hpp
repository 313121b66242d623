#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ellint {

/// Worker count: hardware concurrency capped by ELLINT_THREADS.
inline int max_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("ELLINT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

/// Run fn(i) for i in [0, n). Work is split in fixed contiguous blocks so any
/// per-index output is identical regardless of thread count; fn must only
/// write to index-owned state.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(max_threads(), std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace ellint
