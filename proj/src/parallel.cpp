#include "tngp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace tngp {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) {
    if (n <= 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
    }
    g_threads.store(n);
}

int num_threads() { return g_threads.load(); }

void parallel_for(Eigen::Index n,
                  const std::function<void(Eigen::Index, Eigen::Index)>& fn) {
    const int workers = std::min<Eigen::Index>(num_threads(), std::max<Eigen::Index>(n, 1));
    if (workers <= 1 || n < 256) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const Eigen::Index chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        const Eigen::Index begin = t * chunk;
        const Eigen::Index end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace tngp
