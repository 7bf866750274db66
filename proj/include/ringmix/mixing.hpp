#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ringmix/kernel.hpp"

namespace ringmix {

// Which point-mass starts enter the worst-case distance. "all" is the full
// definition; "hubs" covers hubs and their cycle neighbors; "single:v" is the
// cheap sweep mode.
struct StartSet {
  enum class Mode { All, Hubs, Single };
  Mode mode = Mode::Single;
  int64_t v = 0;

  static StartSet all() { return {Mode::All, 0}; }
  static StartSet hubs() { return {Mode::Hubs, 0}; }
  static StartSet single(int64_t v) { return {Mode::Single, v}; }
  static StartSet parse(const std::string& s);

  std::vector<int64_t> vertices(const PerturbedCycle& g) const;
  std::string str() const;
};

double tv_distance(const DistVector& d1, const DistVector& d2);
double tv_to_uniform(const DistVector& d);

int64_t default_t_max(int64_t n);  // 50 n^2

struct MixResult {
  bool mixed = false;
  int64_t t = -1;      // first t with d(t) <= eps, or t_max if not mixed
  double last_d = 1.0; // d at t (mixed) / at t_max (not mixed)
  int64_t t_max = 0;
};

struct MixingProfile {
  std::vector<std::pair<int64_t, double>> points;  // (t, d(t))
  MixResult result;
  double eps = 0.0;
};

// d(t) curve sampled every record_every steps (plus t=0 and the stop step);
// stops once d <= eps_stop. Pass eps_stop <= 0 to force the full horizon.
MixingProfile distance_profile(const PerturbedCycle& g, const WalkParams& w,
                               const StartSet& starts, int64_t t_max,
                               int64_t record_every, double eps_stop);

// least t with d(t) <= eps; exact: the monotone curve is bracketed on a
// coarse stride, then replayed stepwise from the last checkpoint
MixResult mixing_time(const PerturbedCycle& g, const WalkParams& w, double eps,
                      const StartSet& starts, int64_t t_max = -1);

struct ExpFit {
  double slope = 0, intercept = 0, residual = 0;
};

// least squares of log t against log n; residual = rms in log space
ExpFit exponent_fit(const std::vector<std::pair<double, double>>& n_t_points);

}  // namespace ringmix
