#include "ringmix/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace ringmix {

void validate_params(const WalkParams& w) {
  if (!(w.p > w.q)) throw ConfigError("need p > q");
  if (!(w.q >= 0.0)) throw ConfigError("need q >= 0");
  if (!(w.a >= 0.0)) throw ConfigError("need a >= 0");
  if (w.p + w.q + w.a > 1.0 + 1e-12) throw ConfigError("need p + q + a <= 1");
}

DistVector point_mass(int64_t n, int64_t v) {
  if (v < 0 || v >= n) throw ConfigError("vertex out of range");
  DistVector d(static_cast<size_t>(n), 0.0);
  d[static_cast<size_t>(v)] = 1.0;
  return d;
}

DistVector uniform_dist(int64_t n) {
  return DistVector(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
}

std::vector<std::pair<int64_t, double>> transition_row(const PerturbedCycle& g,
                                                       const WalkParams& w,
                                                       int64_t v) {
  validate_params(w);
  if (v < 0 || v >= g.n) throw ConfigError("vertex out of range");
  int hj = g.hub_index(v);
  double loop = 1.0 - w.p - w.q - (hj >= 0 ? w.a : 0.0);
  if (loop < 0) loop = 0;  // p+q+a == 1 up to rounding

  std::vector<std::pair<int64_t, double>> row;
  row.emplace_back((v + 1) % g.n, w.p);
  row.emplace_back((v + g.n - 1) % g.n, w.q);
  if (hj >= 0 && w.a > 0) row.emplace_back(g.hubs[g.match[hj]], w.a);
  if (loop > 0) row.emplace_back(v, loop);

  std::sort(row.begin(), row.end());
  std::vector<std::pair<int64_t, double>> out;
  for (const auto& [t, m] : row) {
    if (!out.empty() && out.back().first == t)
      out.back().second += m;
    else
      out.emplace_back(t, m);
  }
  return out;
}

Evolver::Evolver(const PerturbedCycle& g, const WalkParams& w)
    : n(g.n), p(w.p), q(w.q), a(w.a), r(1.0 - w.p - w.q) {
  validate_params(w);
  hub_v.reserve(g.hubs.size());
  match_v.reserve(g.hubs.size());
  for (size_t j = 0; j < g.hubs.size(); ++j) {
    hub_v.push_back(g.hubs[j]);
    match_v.push_back(g.hubs[static_cast<size_t>(g.match[j])]);
  }
}

void Evolver::step(const DistVector& in, DistVector& out) const {
  const auto nn = static_cast<size_t>(n);
  if (in.size() != nn) throw ConfigError("distribution length mismatch");
  out.resize(nn);
  const double* __restrict x = in.data();
  double* __restrict o = out.data();
  o[0] = p * x[nn - 1] + q * x[1] + r * x[0];
  for (size_t i = 1; i + 1 < nn; ++i)
    o[i] = p * x[i - 1] + q * x[i + 1] + r * x[i];
  o[nn - 1] = p * x[nn - 2] + q * x[0] + r * x[nn - 1];
  for (size_t j = 0; j < hub_v.size(); ++j) {
    double m = a * x[hub_v[j]];
    o[hub_v[j]] -= m;
    o[match_v[j]] += m;
  }
}

DistVector step_distribution(const PerturbedCycle& g, const WalkParams& w,
                             const DistVector& d) {
  Evolver ev(g, w);
  DistVector out;
  ev.step(d, out);
  return out;
}

Move draw_move(const WalkParams& w, bool at_hub, Rng& rng) {
  double u = rng.next_double();
  if (u < w.p) return Move::Forward;
  if (u < w.p + w.q) return Move::Backward;
  if (at_hub && u < w.p + w.q + w.a) return Move::Jump;
  return Move::Loop;
}

int64_t sample_step(const PerturbedCycle& g, const WalkParams& w, int64_t v,
                    Rng& rng) {
  int hj = g.hub_index(v);
  switch (draw_move(w, hj >= 0, rng)) {
    case Move::Forward:
      return (v + 1) % g.n;
    case Move::Backward:
      return (v + g.n - 1) % g.n;
    case Move::Jump:
      return g.hubs[static_cast<size_t>(g.match[hj])];
    case Move::Loop:
      return v;
  }
  return v;  // unreachable
}

}  // namespace ringmix
