#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace mo {

std::uint64_t splitmix64(std::uint64_t x);

// Engine for sample `index` of a run seeded with `seed`. Sample streams do
// not depend on how samples are spread over workers.
std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index);

// Worker count from MO_WORKERS, else hardware concurrency (capped at 16).
unsigned worker_count();

// Runs body(i) for i in [begin, end) on worker_count() threads. Exceptions
// from the lowest failing index are rethrown after all workers stop.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace mo
