#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (master seed, purpose, coordinates), so streams for different agents or
// purposes never interfere and adding agents leaves existing draws intact.

#include <cstdint>

namespace consensus::rng {

enum class Purpose : std::uint64_t {
  kSchedule = 1,
  kSyncSchedule = 2,
  kDelay = 3,
  kAvailability = 4,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, Purpose purpose,
                            std::uint64_t a = 0, std::uint64_t b = 0,
                            std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, Purpose purpose,
                           std::uint64_t a = 0, std::uint64_t b = 0,
                           std::uint64_t c = 0) {
  return static_cast<double>(key(seed, purpose, a, b, c) >> 11) *
         0x1.0p-53;
}

}  // namespace consensus::rng
