#include <doctest.h>

#include <array>
#include <cmath>

#include "ringmix/rng.hpp"

using namespace ringmix;

TEST_SUITE("rng") {

// reference stream computed with an independent implementation of
// splitmix64-seeded xoshiro256**; pinned so the generator can never drift
TEST_CASE("seeding is frozen") {
  Rng r(42);
  std::array<uint64_t, 4> want{0xbdd732262feb6e95ULL, 0x28efe333b266f103ULL,
                               0x47526757130f9f52ULL, 0x581ce1ff0e4ae394ULL};
  CHECK(r.s == want);
}

TEST_CASE("output stream is frozen") {
  Rng r(42);
  std::array<uint64_t, 5> want{1546998764402558742ULL, 6990951692964543102ULL,
                               12544586762248559009ULL, 17057574109182124193ULL,
                               18295552978065317476ULL};
  for (uint64_t w : want) CHECK(r.next() == w);

  Rng r0(0);
  CHECK(r0.next() == 11091344671253066420ULL);
  CHECK(r0.next() == 13793997310169335082ULL);
  CHECK(r0.next() == 1900383378846508768ULL);
}

TEST_CASE("derive_seed is frozen and stream-separating") {
  CHECK(derive_seed(42, 0) == 13679457532755275413ULL);
  CHECK(derive_seed(42, 1) == 2949826092126892291ULL);
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("next_double lands in [0,1)") {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    double x = r.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("below is unbiased across a small modulus") {
  Rng r(3);
  const uint64_t bound = 7;
  std::array<int64_t, 7> counts{};
  const int64_t trials = 700000;
  for (int64_t i = 0; i < trials; ++i) counts[r.below(bound)]++;
  double expect = static_cast<double>(trials) / static_cast<double>(bound);
  for (auto c : counts)
    CHECK(std::abs(static_cast<double>(c) - expect) < 5 * std::sqrt(expect));
  CHECK(r.below(1) == 0);
}

TEST_CASE("same seed, same stream") {
  Rng a(999), b(999);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

}  // TEST_SUITE
