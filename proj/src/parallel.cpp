#include "heli/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace heli {

int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("HELIDEFECT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

namespace {

// Chunk size is fixed so that chunk boundaries (and with them all
// deterministic per-chunk arithmetic) never depend on the worker count.
constexpr std::size_t kChunk = 16384;

void run_chunks(std::size_t nchunks, const std::function<void(std::size_t)>& chunk_fn) {
    const int nthreads = std::min<std::size_t>(thread_count(), nchunks);
    if (nthreads <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) chunk_fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                chunk_fn(c);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    run_chunks(nchunks, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        fn(lo, std::min(lo + kChunk, n));
    });
}

void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    run_chunks(n, fn);
}

} // namespace heli
