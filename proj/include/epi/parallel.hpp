// Tiny blocked parallel-for. Work items are indexed, every item derives its
// own random substream, and reductions are written to be order-independent,
// so results never depend on the thread count.

#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace epi {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// fn(chunk_index, begin, end) over [0, total) split into contiguous blocks.
template <typename Fn>
void parallel_chunks(std::int64_t total, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (total <= 0) return;
    const int nchunks = static_cast<int>(std::min<std::int64_t>(threads, total));
    if (nchunks <= 1) {
        fn(0, std::int64_t{0}, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nchunks));
    const std::int64_t base = total / nchunks;
    const std::int64_t extra = total % nchunks;
    std::int64_t begin = 0;
    for (int c = 0; c < nchunks; ++c) {
        const std::int64_t len = base + (c < extra ? 1 : 0);
        const std::int64_t end = begin + len;
        pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace epi
