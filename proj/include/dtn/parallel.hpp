#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace dtn {

// Worker count: DTN_THREADS if set (clamped to >= 1), else the hardware count.
inline int thread_count() {
    if (const char* env = std::getenv("DTN_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static strided split. Results are deterministic as long as iterations write
// disjoint outputs, which is how every caller uses it (per-column assembly,
// per-basis-function solves).
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace dtn
