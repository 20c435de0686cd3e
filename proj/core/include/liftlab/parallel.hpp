#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace liftlab {

/// Splits [0, n) into contiguous chunks, runs `body(begin, end)` on each chunk
/// (possibly on worker threads) and folds the chunk results in chunk order, so
/// the result never depends on scheduling.
template <class Result, class Body, class Merge>
Result parallel_reduce(std::size_t n, unsigned threads, Result init, Body body, Merge merge) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n / 4096 + 1));
    if (workers == 1) return merge(std::move(init), body(std::size_t{0}, n));
    std::vector<Result> partial(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * step);
        const std::size_t hi = std::min(n, lo + step);
        pool.emplace_back([&, w, lo, hi] { partial[w] = body(lo, hi); });
    }
    for (auto& t : pool) t.join();
    for (auto& p : partial) init = merge(std::move(init), std::move(p));
    return init;
}

}  // namespace liftlab
