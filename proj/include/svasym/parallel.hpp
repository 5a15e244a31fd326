#pragma once

#include <cstddef>
#include <functional>

namespace svasym {

/// Worker count from SVASYM_THREADS, falling back to `fallback` when unset or invalid.
int workers_from_env(int fallback = 1);

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on up to
/// `workers` threads. Chunk boundaries do not affect what body computes for
/// a given index, so results stored per index are worker-independent.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace svasym
