#ifndef MODSPACE_PARALLEL_HPP
#define MODSPACE_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace modspace {

// Thread count: explicit argument wins, then MODSPACE_THREADS, then the
// hardware count.  Results must be written into caller-owned slots indexed
// by the loop variable, so the outcome is identical for any thread count.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MODSPACE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    threads = std::min<std::size_t>(std::max(threads, 1), count == 0 ? 1 : count);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = static_cast<std::size_t>(t); i < count; i += static_cast<std::size_t>(threads)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace modspace

#endif
