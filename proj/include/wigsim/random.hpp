#pragma once

#include <cstdint>
#include <initializer_list>

namespace wigsim {

// splitmix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation. The same key sequence always gives the
/// same seed, independent of how many other draws were made.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (auto k : keys) h = mix64(h ^ mix64(k));
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits of a hash.
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream tags for derive_seed.
namespace stream {
inline constexpr std::uint64_t graph = 0x4752;
inline constexpr std::uint64_t placement = 0x504c;
inline constexpr std::uint64_t fading = 0x4641;
inline constexpr std::uint64_t schedule = 0x5343;
inline constexpr std::uint64_t model = 0x4d4f;
inline constexpr std::uint64_t split = 0x5350;
}  // namespace stream

}  // namespace wigsim
