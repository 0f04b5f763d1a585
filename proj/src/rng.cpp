#include "fwopt/rng.hpp"

#include <cmath>
#include <numbers>

namespace fwopt {

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const noexcept {
    const std::uint64_t key = mix64(seed_ ^ mix64(stream * 0xD1B54A32D192ED03ULL));
    return mix64(key ^ mix64(counter + 0x632BE59BD9B4E019ULL));
}

double CounterRng::uniform_pos(std::uint64_t stream, std::uint64_t counter) const noexcept {
    // 53 random bits mapped onto {1, ..., 2^53} / 2^53.
    return static_cast<double>((bits(stream, counter) >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t counter) const noexcept {
    const double u1 = uniform_pos(stream, 2 * counter);
    const double u2 = uniform(stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace fwopt
