#pragma once

#include <cstddef>
#include <functional>

namespace fuzzstat {

// Worker cap: FUZZSTAT_THREADS env var if set, else hardware concurrency.
std::size_t max_threads();

// Runs fn(begin, end) over disjoint contiguous chunks of [0, count), one chunk
// per worker. Callers must write results into per-index slots (or per-chunk
// buffers merged afterwards with associative, commutative folds) so the output
// is identical for any worker count.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace fuzzstat
