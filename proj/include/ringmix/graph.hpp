#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ringmix/common.hpp"

namespace ringmix {

// Cycle Z_n with 2k distinct hub vertices joined by a perfect matching.
// Canonical form: hubs sorted ascending, edges ordered by their lower hub
// index; lengths/arcs are derived, never stored independently.
struct PerturbedCycle {
  int64_t n = 0;
  int k = 0;
  std::vector<int64_t> hubs;              // sorted, size 2k
  std::vector<int> match;                 // hub index -> matched hub index
  std::vector<std::array<int, 2>> edges;  // k pairs (lo, hi) of hub indices
  std::vector<int64_t> lengths;           // signed edge lengths in (-n/2, n/2]
  std::vector<int64_t> arcs;              // arcs[j] = cyclic gap hub j -> j+1

  bool operator==(const PerturbedCycle&) const = default;

  // hub index of vertex v, or -1
  int hub_index(int64_t v) const;
};

// normalize a displacement to the representative in (-n/2, n/2]
int64_t signed_length(int64_t delta, int64_t n);

PerturbedCycle make_cycle(int64_t n);  // k = 0
PerturbedCycle from_pairs(int64_t n,
                          const std::vector<std::pair<int64_t, int64_t>>& hub_pairs);

// uniform 2k-subset of vertices + uniform perfect matching, pure in (n,k,seed)
PerturbedCycle sample_instance(int64_t n, int k, uint64_t seed);

// canonical one-line text form: n=<n> k=<k> hubs=<h1,...> match=<i:j,...>
// (hub indices in match are 1-based; k=0 serializes as just "n=<n> k=0").
// from_spec also accepts "n=<n> k=<k> seed=<s>" for sampled instances.
std::string serialize(const PerturbedCycle& g);
PerturbedCycle from_spec(const std::string& line);

double b1_threshold(int64_t n);  // log^2 n, natural log
// true iff every arc is strictly longer than the threshold (default log^2 n)
bool check_B1(const PerturbedCycle& g, double threshold = -1.0);

}  // namespace ringmix
