// Seeded, stream-splittable randomness.
//
// Draw sequences must be reproducible across runs and platforms for a fixed
// (seed, stream) pair, so distribution mapping is done by hand here instead
// of through <random>'s distributions (whose algorithms are
// implementation-defined). The engine itself, mt19937_64, is fully specified
// by the standard.

#ifndef PARTINFO_RNG_HPP
#define PARTINFO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "partinfo/errors.hpp"

namespace partinfo {

class RngStream {
   public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), engine_(mix(mix(seed) + mix(stream + 0x632be59bd9b4e019ull))) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        if (!(lo <= hi)) throw argument_error("uniform: lo > hi");
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal via Box–Muller. Two uniforms per draw, no cached
    /// spare, so the mapping from the uniform stream is stateless.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::vector<double> normal_vector(std::size_t n) {
        std::vector<double> v(n);
        for (double& x : v) x = normal();
        return v;
    }

    bool bernoulli(double p) { return uniform01() < p; }

   private:
    // splitmix64 finalizer; decorrelates nearby (seed, stream) pairs.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace partinfo

#endif  // PARTINFO_RNG_HPP
