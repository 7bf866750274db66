#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ringmix/graph.hpp"
#include "ringmix/rng.hpp"

using namespace ringmix;

TEST_SUITE("graph") {

TEST_CASE("signed_length picks the representative in (-n/2, n/2]") {
  CHECK(signed_length(5, 12) == 5);
  CHECK(signed_length(6, 12) == 6);   // exactly n/2 stays positive
  CHECK(signed_length(7, 12) == -5);
  CHECK(signed_length(6, 10) == -4);
  CHECK(signed_length(-3, 10) == -3);
  CHECK(signed_length(0, 10) == 0);
  CHECK(signed_length(23, 10) == 3);
}

TEST_CASE("single edge: derived lengths and arcs") {
  PerturbedCycle g = from_pairs(12, {{2, 7}});
  CHECK(g.n == 12);
  CHECK(g.k == 1);
  CHECK(g.hubs == std::vector<int64_t>{2, 7});
  CHECK(g.match == std::vector<int>{1, 0});
  CHECK(g.lengths == std::vector<int64_t>{5});
  CHECK(g.arcs == std::vector<int64_t>{5, 7});
  CHECK(serialize(g) == "n=12 k=1 hubs=2,7 match=1:2");

  // wraparound: the short way from 0 to 6 on Z_10 is backwards
  PerturbedCycle h = from_pairs(10, {{0, 6}});
  CHECK(h.lengths == std::vector<int64_t>{-4});
  CHECK(h.arcs == std::vector<int64_t>{6, 4});
}

TEST_CASE("pair order and endpoint order do not matter") {
  PerturbedCycle a = from_pairs(100, {{5, 40}, {80, 12}});
  PerturbedCycle b = from_pairs(100, {{12, 80}, {40, 5}});
  CHECK(a == b);
  CHECK(a.hubs == std::vector<int64_t>{5, 12, 40, 80});
  CHECK(a.edges.size() == 2);
  CHECK(serialize(a) == serialize(b));
}

TEST_CASE("round trip through the canonical line is exact") {
  for (uint64_t s = 0; s < 50; ++s) {
    PerturbedCycle g = sample_instance(999, 3, s);
    CHECK(from_spec(serialize(g)) == g);
  }
  PerturbedCycle c = make_cycle(17);
  CHECK(serialize(c) == "n=17 k=0");
  CHECK(from_spec("n=17 k=0") == c);
}

TEST_CASE("from_spec accepts seeded form") {
  PerturbedCycle g = from_spec("n=2000 k=3 seed=77");
  CHECK(g == sample_instance(2000, 3, 77));
  CHECK(g.k == 3);
  CHECK(g.lengths.size() == 3);
}

TEST_CASE("sampling is pure in (n, k, seed)") {
  CHECK(sample_instance(5000, 2, 123) == sample_instance(5000, 2, 123));
  CHECK(sample_instance(5000, 2, 123) != sample_instance(5000, 2, 124));
}

TEST_CASE("sampled instances satisfy the structural invariants") {
  for (uint64_t s = 0; s < 1000; ++s) {
    int k = 1 + static_cast<int>(s % 4);
    PerturbedCycle g = sample_instance(300, k, derive_seed(11, s));
    REQUIRE(static_cast<int>(g.hubs.size()) == 2 * k);
    for (int j = 0; j < 2 * k; ++j) {
      if (j) CHECK(g.hubs[j] > g.hubs[j - 1]);
      CHECK(g.hubs[j] >= 0);
      CHECK(g.hubs[j] < g.n);
      CHECK(g.match[g.match[j]] == j);
      CHECK(g.match[j] != j);
    }
    int64_t arc_sum = 0;
    for (int64_t a : g.arcs) {
      CHECK(a >= 1);
      arc_sum += a;
    }
    CHECK(arc_sum == g.n);
    for (int64_t l : g.lengths) {
      CHECK(l != 0);
      CHECK(2 * l <= g.n);
      CHECK(2 * l > -g.n);
    }
  }
}

TEST_CASE("hub pairs are uniform over all unordered pairs") {
  // n=20, k=1: 190 possible hub sets; chi-square over 1e5 samples
  const int64_t n = 20, trials = 100000;
  std::map<std::pair<int64_t, int64_t>, int64_t> counts;
  for (int64_t s = 0; s < trials; ++s) {
    PerturbedCycle g = sample_instance(n, 1, derive_seed(555, static_cast<uint64_t>(s)));
    counts[{g.hubs[0], g.hubs[1]}]++;
  }
  const double cells = 190.0;
  CHECK(counts.size() == 190);
  double expect = static_cast<double>(trials) / cells;
  double chi2 = 0;
  for (const auto& [k_, c] : counts) {
    double d = static_cast<double>(c) - expect;
    chi2 += d * d / expect;
  }
  // dof = 189: mean 189, sd ~ 19.4; allow 5 sigma
  CHECK(chi2 < 189 + 5 * std::sqrt(2 * 189.0));
  CHECK(chi2 > 189 - 5 * std::sqrt(2 * 189.0));
}

TEST_CASE("hub_index inverts the hub list") {
  PerturbedCycle g = from_pairs(50, {{3, 30}, {10, 44}});
  CHECK(g.hub_index(3) == 0);
  CHECK(g.hub_index(10) == 1);
  CHECK(g.hub_index(30) == 2);
  CHECK(g.hub_index(44) == 3);
  CHECK(g.hub_index(4) == -1);
  CHECK(g.hub_index(49) == -1);
}

TEST_CASE("arc threshold") {
  CHECK(b1_threshold(12) == doctest::Approx(std::log(12.0) * std::log(12.0)));
  // arcs (5,7) against log^2(12) ~ 6.17: 5 fails the strict bound
  CHECK_FALSE(check_B1(from_pairs(12, {{2, 7}})));
  // explicit threshold: both arcs clear 4.9, arc 5 does not clear 5
  CHECK(check_B1(from_pairs(12, {{2, 7}}), 4.9));
  CHECK_FALSE(check_B1(from_pairs(12, {{2, 7}}), 5.0));
  // wide arcs on a big cycle pass
  CHECK(check_B1(from_pairs(1000, {{0, 500}})));
  // k = 0 has no arcs to violate the bound
  CHECK(check_B1(make_cycle(12)));
}

TEST_CASE("bad inputs are rejected") {
  CHECK_THROWS_AS(make_cycle(2), ConfigError);
  CHECK_THROWS_AS(from_pairs(10, {{3, 3}}), ConfigError);             // loop
  CHECK_THROWS_AS(from_pairs(10, {{1, 2}, {2, 5}}), ConfigError);     // shared hub
  CHECK_THROWS_AS(from_pairs(10, {{1, 12}}), ConfigError);            // range
  CHECK_THROWS_AS(from_pairs(3, {{0, 1}, {2, 3}}), ConfigError);      // n < 2k + range
  CHECK_THROWS_AS(from_spec("n=12"), ConfigError);
  CHECK_THROWS_AS(from_spec("n=12 k=1 hubs=2,7"), ConfigError);
  CHECK_THROWS_AS(from_spec("n=12 k=1 hubs=2,7 match=1:1"), ConfigError);
  CHECK_THROWS_AS(from_spec("n=12 k=1 hubs=7,2 match=1:2"), ConfigError);
  CHECK_THROWS_AS(from_spec("n=12 k=1 hubs=2,7 match=1:2 seed=4"), ConfigError);
  CHECK_THROWS_AS(from_spec("n=12 k=1 bogus=3"), ConfigError);
  CHECK_THROWS_AS(sample_instance(5, 3, 1), ConfigError);
}

}  // TEST_SUITE
