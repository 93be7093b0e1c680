// Counter-based deterministic RNG. Identical (seed, stream) gives identical
// sequences on every platform and at every thread count; parallel consumers
// derive disjoint substreams from a task index.
#pragma once

#include <cstdint>
#include <utility>

namespace uglab {

struct SeededRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;

    SeededRng() = default;
    explicit SeededRng(std::uint64_t seed_, std::uint64_t stream_ = 0)
        : seed(seed_), stream(stream_) {}

    std::uint64_t next_u64();

    // Uniform on (0,1]; never returns 0 so log() is safe.
    double uniform01();

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

    // Standard normal pair via Box-Muller (IEEE-754 double, round-to-nearest).
    std::pair<double, double> gaussian_pair();
    double gaussian() { return gaussian_pair().first; }

    // Pure derivation: same (seed, stream, task) always gives the same substream.
    SeededRng substream(std::uint64_t task) const;
};

}  // namespace uglab
