#pragma once

#include <cstddef>
#include <functional>

namespace spikelet {

// Worker cap: SPIKELET_THREADS env var if set (min 1), else hardware concurrency.
std::size_t workerCount();

// Runs fn(i) for i in [0, n) across workers; blocks until done. Results must be
// written to caller-owned slots indexed by i so ordering stays deterministic.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace spikelet
