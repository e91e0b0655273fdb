#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace wkam {

// Deterministic parallel loop: the work partition does not affect results
// because every index writes only its own slot.
inline void parallel_for(int begin, int end, const std::function<void(int)>& body) {
    int n = end - begin;
    if (n <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    int workers = static_cast<int>(hw == 0 ? 4 : hw);
    if (workers > n) workers = n;
    if (workers <= 1 || n < 32) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::atomic<int> next{begin};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const int chunk = std::max(1, n / (workers * 8));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                int i0 = next.fetch_add(chunk);
                if (i0 >= end) return;
                int i1 = std::min(end, i0 + chunk);
                for (int i = i0; i < i1; ++i) body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace wkam
