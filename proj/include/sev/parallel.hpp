#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace sev {

/// Worker count resolution: explicit value, then PP_JOBS, then hardware.
inline int resolve_jobs(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PP_JOBS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(i) for i in [0, n) on `jobs` threads, in deterministic chunks.
/// The work per index must be independent; results must be written to
/// disjoint slots so the outcome does not depend on the thread count.
template <class Fn>
inline void parallel_for(int n, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += jobs) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace sev
