#include "tfpanel/rng.hpp"

#include <cmath>

namespace tfpanel {

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    h = splitmix64(h ^ d);
    return h;
}

} // namespace

double CounterRng::uniform(std::uint64_t unit, std::uint64_t period,
                           std::uint64_t stream, std::uint64_t draw) const {
    std::uint64_t h = mix_key(seed_, unit, period, stream, draw);
    // 53 high bits, shifted into (0, 1].
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t unit, std::uint64_t period,
                          std::uint64_t stream, std::uint64_t draw) const {
    double u1 = uniform(unit, period, stream, 2 * draw);
    double u2 = uniform(unit, period, stream, 2 * draw + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace tfpanel
