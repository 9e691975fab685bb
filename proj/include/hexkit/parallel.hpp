#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace hexkit {

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunks write disjoint
// outputs, so results do not depend on the thread count.
template <typename Fn>
void parallel_for(int64_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        fn(int64_t{0}, n);
        return;
    }
    const int64_t workers = std::min<int64_t>(threads, n);
    const int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int64_t w = 0; w < workers; ++w) {
        const int64_t begin = w * chunk;
        const int64_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

}  // namespace hexkit
