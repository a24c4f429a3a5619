#pragma once

#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dms {

/// Thrown when a problem has no feasible solution (e.g. an emission budget
/// below the minimum achievable emissions of the instance).
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Worker count for parallel sections: DMS_THREADS if set, else hardware.
inline int thread_count() {
    if (const char* env = std::getenv("DMS_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n). Work items must be independent; results keyed
/// by index so the outcome does not depend on the schedule.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

/// Fixed-width float formatting for CSV output; stable across reruns.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace dms
