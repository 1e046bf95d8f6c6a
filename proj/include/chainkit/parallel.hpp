#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace chainkit {

/// Number of worker threads to use when the caller passes 0 ("auto").
inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(begin, end) over a contiguous partition of [0, total).
///
/// Workers write to disjoint, preallocated slots only; the partition depends
/// only on `total` and `threads`, never on scheduling, so results must be
/// reduced in index order by the caller to stay deterministic.
inline void parallel_chunks(long total, int threads,
                            const std::function<void(long, long)>& fn) {
    threads = std::min<long>(resolve_threads(threads), std::max(total, 1L));
    if (threads <= 1 || total <= 1) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long base = total / threads;
    const long rem = total % threads;
    long begin = 0;
    for (int w = 0; w < threads; ++w) {
        const long len = base + (w < rem ? 1 : 0);
        const long end = begin + len;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

}  // namespace chainkit
