#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace kingis {

/// 0 means "use the machine's parallelism".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are
/// disjoint, so bodies that write only inside their own range need no
/// synchronisation.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body, std::size_t min_chunk = 4096) {
    const std::size_t workers =
        std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
    if (workers <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk), end = std::min(n, begin + chunk);
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(std::size_t{0}, std::min(n, chunk));
}

}  // namespace kingis
