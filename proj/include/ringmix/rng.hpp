#pragma once

#include <array>
#include <cstdint>

namespace ringmix {

// Frozen generator identifier; stored in every record so results stay
// reproducible across versions and platforms.
inline constexpr const char* kRngId = "xoshiro256ss-1";

namespace detail {
inline constexpr uint64_t rotl64(uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
inline constexpr uint64_t splitmix64(uint64_t& z) {
  z += 0x9e3779b97f4a7c15ULL;
  uint64_t t = z;
  t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
  t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
  return t ^ (t >> 31);
}
}  // namespace detail

// xoshiro256** seeded through splitmix64. Not std::mt19937 etc. because the
// stream must be bit-identical across compilers/platforms.
struct Rng {
  std::array<uint64_t, 4> s;

  explicit Rng(uint64_t seed) {
    uint64_t z = seed;
    for (auto& si : s) si = detail::splitmix64(z);
  }

  uint64_t next() {
    uint64_t r = detail::rotl64(s[1] * 5, 7) * 9;
    uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = detail::rotl64(s[3], 45);
    return r;
  }

  // uniform in [0,1), 53-bit mantissa
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // unbiased uniform in [0, bound), Lemire rejection
  uint64_t below(uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<uint64_t>(m);
    if (lo < bound) {
      uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }
};

// Decorrelated per-stream seed (trial index, cell index, ...) from a base seed.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ringmix
