#pragma once

#include <algorithm>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace uft {

/// Runs body(begin, end) over a contiguous partition of [0, n) on up to
/// `threads` threads. Each index is processed exactly once with a fixed
/// per-index reduction order, so results do not depend on the thread count.
template <typename F>
void parallel_for(Eigen::Index n, int threads, F&& body) {
    if (threads <= 1 || n < 2) {
        body(Eigen::Index{0}, n);
        return;
    }
    int workers = static_cast<int>(std::min<Eigen::Index>(threads, n));
    Eigen::Index chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) {
        Eigen::Index begin = t * chunk;
        Eigen::Index end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(Eigen::Index{0}, std::min(n, chunk));
    for (auto& th : pool) th.join();
}

}  // namespace uft
