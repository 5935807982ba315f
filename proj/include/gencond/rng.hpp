#pragma once

#include <cstdint>

namespace gencond {

/// SplitMix64 (Steele, Lea, Vigna): 64-bit generator with a full-period
/// state walk. Chosen over std:: engines so that census numbers are
/// reproducible across platforms and standard libraries; the output
/// sequence for a given seed is part of the report contract.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) using the top 53 bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform double in [-1, 1).
    double symmetric() { return uniform(-1.0, 1.0); }

    /// Derive an independent stream for a substream index. Used to make
    /// per-sample work order-independent under parallel execution.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mix(seed);
        std::uint64_t a = mix.next_u64();
        SplitMix64 idx(index ^ 0xd1b54a32d192ed03ULL);
        return SplitMix64(a ^ idx.next_u64());
    }

private:
    std::uint64_t state_;
};

}  // namespace gencond
