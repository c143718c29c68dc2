#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mechkit {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Static range partitioning; fn(begin, end) per worker chunk.
inline void parallel_chunks(std::uint64_t count, int threads,
                            const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
    const int t = std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(count, 1));
    if (t <= 1 || count < 2048) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> workers;
    const std::uint64_t chunk = (count + t - 1) / t;
    for (int k = 0; k < t; ++k) {
        const std::uint64_t lo = chunk * static_cast<std::uint64_t>(k);
        const std::uint64_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace mechkit
