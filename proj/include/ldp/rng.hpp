#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ldp::rng {

// SplitMix64 output function (Vigna's constants). mix(seed, k) is the k-th
// output of the SplitMix64 sequence started at `seed`; it is the published
// mixing function behind every derived stream in this library: estimator
// chunk k uses mix(seed, k), curve cell i uses mix(seed, i) and re-chunks
// from there. Distinct (seed, k) pairs give decorrelated 64-bit values.
constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t k) noexcept {
    std::uint64_t z = seed + (k + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One random stream. The engine is std::mt19937_64, whose output sequence
// is pinned by the standard, so a (seed, draw index) pair identifies a value
// on every platform. All variate mappings live here instead of
// <random>'s distributions, whose algorithms are implementation-defined.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe under log().
    double uniform_pos() { return 1.0 - uniform(); }

    // Standard normal via Box-Muller, one variate per call (no cached
    // second value, so the draw count per call is fixed).
    double normal() {
        double u = uniform_pos();
        double v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        return r * std::cos(6.283185307179586476925286766559 * v);
    }

    // Exponential with unit rate.
    double exponential() { return -std::log(uniform_pos()); }

  private:
    std::mt19937_64 eng_;
};

} // namespace ldp::rng
