#ifndef HELI_PARALLEL_HPP
#define HELI_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace heli {

/// Worker cap: min(hardware, HELIDEFECT_THREADS). At least 1.
int thread_count();

/// Runs fn(begin, end) over disjoint chunks of [0, n). Chunk boundaries are
/// fixed (independent of the worker count), so any writes into disjoint
/// per-index slots give identical results for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Runs fn(i) for i in [0, n), each task independent.
void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace heli

#endif
