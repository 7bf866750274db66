#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ringmix/graph.hpp"
#include "ringmix/rng.hpp"

namespace ringmix {

// Transition probabilities: p forward, q backward, a across the matching edge
// at hubs; whatever is left loops. Doubly stochastic by construction.
struct WalkParams {
  double p = 0.5;
  double q = 0.25;
  double a = 0.25;
};

// p > q >= 0, a >= 0, p+q+a <= 1. (a = 0 is allowed for any k: the walk then
// simply ignores the matching edges.)
void validate_params(const WalkParams& w);

using DistVector = std::vector<double>;

DistVector point_mass(int64_t n, int64_t v);
DistVector uniform_dist(int64_t n);

// sparse row of the operator at v: (target, mass), sorted by target,
// coincident targets accumulated; <= 4 entries
std::vector<std::pair<int64_t, double>> transition_row(const PerturbedCycle& g,
                                                       const WalkParams& w,
                                                       int64_t v);

// d -> dP as a reusable operator: cyclic sweep + hub fixups
struct Evolver {
  Evolver(const PerturbedCycle& g, const WalkParams& w);
  void step(const DistVector& in, DistVector& out) const;

  int64_t n;
  double p, q, a, r;
  std::vector<int64_t> hub_v, match_v;
};

DistVector step_distribution(const PerturbedCycle& g, const WalkParams& w,
                             const DistVector& d);

enum class Move : uint8_t { Forward, Backward, Jump, Loop };

// one labeled step; consumes exactly one rng draw
Move draw_move(const WalkParams& w, bool at_hub, Rng& rng);

// next state with transition_row probabilities; exactly one rng draw
int64_t sample_step(const PerturbedCycle& g, const WalkParams& w, int64_t v,
                    Rng& rng);

}  // namespace ringmix
