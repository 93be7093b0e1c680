#include "uglab/rng.hpp"

#include <cmath>

namespace uglab {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

std::uint64_t SeededRng::next_u64() {
    std::uint64_t x = mix64(counter * kGamma + seed);
    ++counter;
    return mix64(x ^ stream);
}

double SeededRng::uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t SeededRng::uniform_index(std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    if (n == 0) return 0;
    const std::uint64_t limit = n * ((~0ULL) / n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::pair<double, double> SeededRng::gaussian_pair() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

SeededRng SeededRng::substream(std::uint64_t task) const {
    SeededRng r;
    r.seed = seed;
    r.stream = mix64(stream + kGamma * (task + 1));
    return r;
}

}  // namespace uglab
