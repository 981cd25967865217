#pragma once

#include <cstdint>

namespace pptp {

// 64-bit finalizer (splitmix64). Bijective, so distinct inputs never collide.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based draw: the value is a pure function of (seed, stream,
// counter), independent of call order. Simulations key the stream by
// customer id and the counter by sample index, so results do not change
// when the sample loop is split into shards.
constexpr std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) noexcept {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// Top 53 bits to a double in [0, 1).
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double uniform_draw(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) noexcept {
  return to_unit_interval(counter_draw(seed, stream, counter));
}

}  // namespace pptp
