#pragma once

#include <cstdint>

namespace sls {

// SplitMix64 in counter form: the n-th output (n = 1, 2, ...) is
// mix(seed + n * 0x9E3779B97F4A7C15) with the standard SplitMix64 finalizer
// (xor-shift 30, * 0xBF58476D1CE4E5B9, xor-shift 27, * 0x94D049BB133111EB,
// xor-shift 31). uniform() takes the top 53 bits: (x >> 11) * 2^-53.
class CounterRng {
  public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() noexcept {
        ++counter_;
        return mix(seed_ + counter_ * kGolden);
    }

    // In [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace sls
