#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vho {

// Avalanching mixer; turns correlated (seed, stream) pairs into well-spread
// engine seeds so neighbouring stream ids do not produce correlated draws.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// One independent draw sequence per (seed, stream) pair. A stream is a pure
// function of its ids, so trials can be replayed in any order or thread
// without changing a single draw.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : gen_(splitmix64(splitmix64(seed) + stream)) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Zero-mean Gaussian via Box-Muller; the second deviate is cached so a
    // pair of draws costs one transform.
    double normal(double sigma) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_ * sigma;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a) * sigma;
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace vho
