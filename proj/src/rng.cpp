#include "twoinf/rng.hpp"

#include <cmath>

namespace twoinf {

double Rng::normal() {
    // Box-Muller; u1 bounded away from 0 so the log is finite.
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::uniformInt(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = nextU64();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace

std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t a,
                         std::uint64_t b, std::uint64_t c) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (a + 0x9e3779b97f4a7c15ULL));
    s = splitmix64(s ^ (b + 0x7f4a7c159e3779b9ULL));
    s = splitmix64(s ^ (c + 0x94d049bb133111ebULL));
    return s;
}

} // namespace twoinf
