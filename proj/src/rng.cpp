#include "flexagg/rng.hpp"

namespace flexagg {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t draw) const noexcept {
    std::uint64_t h = splitmix64(key_.seed);
    h = splitmix64(h ^ key_.scenario);
    h = splitmix64(h ^ key_.der);
    h = splitmix64(h ^ static_cast<std::uint64_t>(key_.axis));
    return splitmix64(h ^ draw);
}

double CounterRng::uniform01(std::uint64_t draw) const noexcept {
    return static_cast<double>(bits(draw) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi, std::uint64_t draw) const noexcept {
    return lo + (hi - lo) * uniform01(draw);
}

}  // namespace flexagg
