#pragma once

#include <cstdint>
#include <random>

namespace twoinf {

/**
 * Deterministic random stream. mt19937_64 is pinned by the standard, and all
 * distributions here are implemented explicitly, so a (seed, draw sequence)
 * pair produces identical values on every platform and thread count.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t nextU64() { return eng_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double normal();

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [lo, hi] inclusive, by rejection.
    int uniformInt(int lo, int hi);

private:
    std::mt19937_64 eng_;
};

/// splitmix64-style seed derivation; replicate k of a run uses
/// deriveSeed(masterSeed, k, purpose) so parallel and serial runs agree.
std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t a,
                         std::uint64_t b = 0, std::uint64_t c = 0);

} // namespace twoinf
