#pragma once

#include <cstdint>

namespace fwopt {

/// Stateless counter-based generator. Each draw is a pure function of
/// (seed, stream, counter), so any draw can be regenerated without storing
/// it and results do not depend on call order or threading.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const noexcept;

    /// Uniform on (0, 1].
    double uniform_pos(std::uint64_t stream, std::uint64_t counter) const noexcept;

    /// Uniform on [0, 1).
    double uniform(std::uint64_t stream, std::uint64_t counter) const noexcept;

    /// Standard normal via Box-Muller on counters 2c and 2c + 1.
    double normal(std::uint64_t stream, std::uint64_t counter) const noexcept;

private:
    std::uint64_t seed_;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace fwopt
