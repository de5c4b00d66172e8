#pragma once

// Counter-based random stream.
//
// Every variate is a pure function of a key (seed, scenario, der, axis,
// draw). The key words are folded with the SplitMix64 finalizer
// (Steele, Lea, Flood 2014; constants 0x9e3779b97f4a7c15,
// 0xbf58476d1ce4e5b9, 0x94d049bb133111eb), so any variate can be
// recomputed on any platform without replaying a sequence.

#include <cstdint>

namespace flexagg {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

enum class Axis : std::uint32_t { p = 0, q = 1 };

struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t scenario = 0;
    std::uint64_t der = 0;
    Axis axis = Axis::p;
};

class CounterRng {
public:
    explicit constexpr CounterRng(StreamKey key) noexcept : key_(key) {}

    /// Raw 64-bit output for the given draw counter.
    std::uint64_t bits(std::uint64_t draw) const noexcept;

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01(std::uint64_t draw) const noexcept;

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi, std::uint64_t draw) const noexcept;

private:
    StreamKey key_;
};

}  // namespace flexagg
