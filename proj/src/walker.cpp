#include "ringmix/walker.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ringmix/graph.hpp"

namespace ringmix {

namespace {

// dense hub lookup for small n, binary search otherwise
struct HubMap {
  explicit HubMap(const PerturbedCycle& g) : g(g) {
    if (g.n <= (1 << 22)) {
      dense.assign(static_cast<size_t>(g.n), -1);
      for (size_t j = 0; j < g.hubs.size(); ++j)
        dense[static_cast<size_t>(g.hubs[j])] = static_cast<int>(j);
    }
  }
  int at(int64_t v) const {
    if (!dense.empty()) return dense[static_cast<size_t>(v)];
    return g.hub_index(v);
  }
  const PerturbedCycle& g;
  std::vector<int> dense;
};

// Shared trajectory bookkeeping for run_track / fixed-horizon runs.
struct Tracker {
  Tracker(const PerturbedCycle& g, const WalkParams& w, int64_t x0, uint64_t seed)
      : g(g), w(w), hubs(g), rng(seed), pos(x0) {
    if (x0 < 0 || x0 >= g.n) throw ConfigError("x0 out of range");
    validate_params(w);
    const auto nh = static_cast<size_t>(2 * g.k);
    n_g.assign(nh, 0);
    n_j.assign(nh, 0);
    u.assign(nh, 0);
    last_hub = hubs.at(x0);
  }

  // one labeled step; updates beta/drawdown and the decision counters
  void step() {
    int hj = hubs.at(pos);
    switch (draw_move(w, hj >= 0, rng)) {
      case Move::Forward: {
        pos = pos + 1 == g.n ? 0 : pos + 1;
        ++beta;
        if (beta > max_beta) max_beta = beta;
        int aj = hubs.at(pos);
        if (aj >= 0) {
          int prev = aj == 0 ? 2 * g.k - 1 : aj - 1;
          if (last_hub == prev) {  // completed forward traversal of arc prev
            ++u[static_cast<size_t>(prev)];
            if (parity)
              ++n_j[static_cast<size_t>(g.match[prev])];
            else
              ++n_g[static_cast<size_t>(prev)];
            parity = 0;
            origin_hub = -1;
            completed = true;
          }
          last_hub = aj;
        }
        break;
      }
      case Move::Backward: {
        pos = pos == 0 ? g.n - 1 : pos - 1;
        --beta;
        if (max_beta - beta > drawdown) drawdown = max_beta - beta;
        int aj = hubs.at(pos);
        if (aj >= 0) {
          int next = aj + 1 == 2 * g.k ? 0 : aj + 1;
          if (last_hub == next) ++backtrack_events;
          last_hub = aj;
        }
        break;
      }
      case Move::Jump: {
        if (parity == 0) origin_hub = hj;
        parity ^= 1;
        int mj = g.match[hj];
        pos = g.hubs[static_cast<size_t>(mj)];
        last_hub = mj;
        break;
      }
      case Move::Loop:
        break;
    }
    ++steps;
  }

  // a crossing run pending at the horizon is one net crossing from its origin
  void settle_pending() {
    if (parity && origin_hub >= 0) ++n_j[static_cast<size_t>(origin_hub)];
  }

  std::vector<int64_t> traffic() const {
    std::vector<int64_t> y;
    y.reserve(g.edges.size());
    for (const auto& e : g.edges)
      y.push_back(n_j[static_cast<size_t>(e[0])] - n_j[static_cast<size_t>(e[1])]);
    return y;
  }

  const PerturbedCycle& g;
  const WalkParams& w;
  HubMap hubs;
  Rng rng;
  int64_t pos;
  int64_t beta = 0, max_beta = 0, drawdown = 0;
  int64_t steps = 0;
  int last_hub = -1;
  int parity = 0;
  int origin_hub = -1;
  bool completed = false;
  int64_t backtrack_events = 0;
  std::vector<int64_t> n_g, n_j, u;
};

}  // namespace

TrackStats run_track(const PerturbedCycle& g, const WalkParams& w, int64_t x0,
                     int64_t L, uint64_t seed) {
  if (L < 1) throw ConfigError("L must be >= 1");
  Tracker tr(g, w, x0, seed);
  const auto budget =
      static_cast<int64_t>(std::ceil(100.0 * static_cast<double>(L) / (w.p - w.q)));
  while (tr.beta < L) {
    if (tr.steps >= budget)
      throw RunError("step budget exceeded before travelling L");
    tr.step();
  }
  tr.settle_pending();

  TrackStats ts;
  ts.tau = tr.steps;
  ts.L = L;
  ts.max_backtrack = tr.drawdown;
  ts.n_g = std::move(tr.n_g);
  ts.n_j = std::move(tr.n_j);
  ts.u = std::move(tr.u);
  ts.x0 = x0;
  ts.endpoint = tr.pos;
  ts.b2_threshold = b1_threshold(g.n);
  ts.b2_held = static_cast<double>(ts.max_backtrack) < ts.b2_threshold;
  ts.backtrack_events = tr.backtrack_events;
  ts.y.reserve(g.edges.size());
  for (const auto& e : g.edges)
    ts.y.push_back(ts.n_j[static_cast<size_t>(e[0])] -
                   ts.n_j[static_cast<size_t>(e[1])]);
  return ts;
}

namespace {

// P(biased walk from x hits A before 0 | reflecting nothing), 0 <= x <= A.
// Stable for large arcs via expm1; exact q=0 limit is 1 for x >= 1.
double hit_far_prob(double x, double A, double q_over_p) {
  if (x <= 0) return 0.0;
  if (x >= A) return 1.0;
  if (q_over_p == 0.0) return 1.0;
  double l = std::log(q_over_p);  // < 0
  return std::expm1(x * l) / std::expm1(A * l);
}

}  // namespace

DecisionEstimate estimate_decisions(const PerturbedCycle& g, const WalkParams& w,
                                    int hub, int64_t trials, uint64_t seed) {
  validate_params(w);
  if (g.k < 1) throw ConfigError("estimate_decisions needs k >= 1");
  if (hub < 0 || hub >= 2 * g.k) throw ConfigError("hub index out of range");
  if (trials < 1) throw ConfigError("trials must be >= 1");

  const int nh = 2 * g.k;
  const double qop = w.q / w.p;
  DecisionEstimate est;
  est.trials = trials;

  for (int64_t tr = 0; tr < trials; ++tr) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(tr)));
    int at = hub;  // always at some hub between events
    int parity = 0;
    for (;;) {
      Move mv = draw_move(w, true, rng);
      if (mv == Move::Loop) continue;
      if (mv == Move::Jump) {
        parity ^= 1;
        at = g.match[at];
        continue;
      }
      if (mv == Move::Forward) {
        // into arc `at`: reaches the next hub (completing the arc, since the
        // walk sits at its start) or returns here unobserved
        auto A = static_cast<double>(g.arcs[static_cast<size_t>(at)]);
        if (A <= 1.0 || rng.next_double() < hit_far_prob(1.0, A, qop)) {
          if (parity)
            ++est.j_count;
          else
            ++est.g_count;
          break;
        }
        continue;
      }
      // Backward: into the arc ending here; reaches the previous hub or returns
      int prev = at == 0 ? nh - 1 : at - 1;
      auto A = static_cast<double>(g.arcs[static_cast<size_t>(prev)]);
      if (A <= 1.0 || rng.next_double() >= hit_far_prob(A - 1.0, A, qop)) {
        ++est.backtracks;  // backward arrival at the previous hub
        break;
      }
      // returned to `at` from below
    }
  }

  int64_t decided = est.g_count + est.j_count;
  if (decided > 0) {
    est.p_g = static_cast<double>(est.g_count) / static_cast<double>(decided);
    est.p_j = static_cast<double>(est.j_count) / static_cast<double>(decided);
    est.se = std::sqrt(est.p_g * est.p_j / static_cast<double>(decided));
  }
  return est;
}

std::pair<double, double> pg_closed_form(const WalkParams& w) {
  if (!(w.p > w.q)) throw ConfigError("pg_closed_form needs p > q");
  if (!(w.a >= 0)) throw ConfigError("pg_closed_form needs a >= 0");
  double denom = w.p - w.q + 2 * w.a;
  return {(w.p - w.q + w.a) / denom, w.a / denom};
}

std::pair<double, double> absorption_oracle(const WalkParams& w, int arm) {
  if (arm < 2) throw ConfigError("arm must be >= 2");
  if (!(w.p > 0 || w.q > 0 || w.a > 0)) throw ConfigError("degenerate params");
  validate_params(w);

  // Two copies of {-arm..arm}; the walk starts at hub A (offset 0, copy 0)
  // and may cross to hub B (offset 0, copy 1). Absorbed at +arm (G for copy
  // 0, J for copy 1) and at -arm (escaped backwards, vanishing mass).
  const int width = 2 * arm + 1;
  const int N = 2 * width;
  auto idx = [&](int copy, int off) { return copy * width + (off + arm); };

  // g[s] = P(absorb at +arm of copy 0 | s), h[s] = same for copy 1.
  // Solve (I - Q) x = r by Gaussian elimination on the dense system.
  std::vector<double> M(static_cast<size_t>(N) * N, 0.0);
  std::vector<double> rg(N, 0.0), rj(N, 0.0);
  for (int copy = 0; copy < 2; ++copy) {
    for (int off = -arm; off <= arm; ++off) {
      int s = idx(copy, off);
      auto row = M.begin() + static_cast<ptrdiff_t>(s) * N;
      row[s] = 1.0;
      if (std::abs(off) == arm) continue;  // absorbing
      bool hub = off == 0;
      double loop = 1.0 - w.p - w.q - (hub ? w.a : 0.0);
      auto add = [&](int s2, double m) {
        if (s2 == idx(copy, arm)) {
          (copy == 0 ? rg : rj)[s] += m;
        } else if (s2 == idx(copy, -arm)) {
          // escaped; contributes to neither target
        } else {
          row[s2] -= m;
        }
      };
      add(idx(copy, off + 1), w.p);
      add(idx(copy, off - 1), w.q);
      if (hub) add(idx(1 - copy, 0), w.a);
      if (loop > 0) {
        // fold the self loop into the diagonal
        row[s] -= loop;
      }
    }
  }

  // eliminate with partial pivoting, two right-hand sides
  for (int c = 0; c < N; ++c) {
    int piv = c;
    for (int rr = c + 1; rr < N; ++rr)
      if (std::abs(M[static_cast<size_t>(rr) * N + c]) >
          std::abs(M[static_cast<size_t>(piv) * N + c]))
        piv = rr;
    if (M[static_cast<size_t>(piv) * N + c] == 0.0)
      throw RunError("singular absorption system");
    if (piv != c) {
      for (int cc = 0; cc < N; ++cc)
        std::swap(M[static_cast<size_t>(piv) * N + cc],
                  M[static_cast<size_t>(c) * N + cc]);
      std::swap(rg[piv], rg[c]);
      std::swap(rj[piv], rj[c]);
    }
    double d = M[static_cast<size_t>(c) * N + c];
    for (int rr = c + 1; rr < N; ++rr) {
      double f = M[static_cast<size_t>(rr) * N + c] / d;
      if (f == 0.0) continue;
      for (int cc = c; cc < N; ++cc)
        M[static_cast<size_t>(rr) * N + cc] -= f * M[static_cast<size_t>(c) * N + cc];
      rg[rr] -= f * rg[c];
      rj[rr] -= f * rj[c];
    }
  }
  std::vector<double> xg(N), xj(N);
  for (int rr = N - 1; rr >= 0; --rr) {
    double sg = rg[rr], sj = rj[rr];
    for (int cc = rr + 1; cc < N; ++cc) {
      sg -= M[static_cast<size_t>(rr) * N + cc] * xg[cc];
      sj -= M[static_cast<size_t>(rr) * N + cc] * xj[cc];
    }
    double d = M[static_cast<size_t>(rr) * N + rr];
    xg[rr] = sg / d;
    xj[rr] = sj / d;
  }
  int start = idx(0, 0);
  return {xg[start], xj[start]};
}

double GamblerFacts::escape_prob(int b) const {
  if (b <= 0) return 1.0;
  return std::pow(q_over_p, b);
}

GamblerFacts gambler_facts(const WalkParams& w) {
  if (!(w.p > w.q)) throw ConfigError("gambler_facts needs p > q");
  GamblerFacts f;
  f.q_over_p = w.q / w.p;
  f.expected_tau1 = 1.0 / (w.p - w.q);
  return f;
}

std::vector<SpreadBucket> conditional_endpoint_spread(const PerturbedCycle& g,
                                                      const WalkParams& w,
                                                      int64_t T, int64_t trials,
                                                      uint64_t seed) {
  if (T < 1) throw ConfigError("T must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");

  struct Acc {
    int64_t count = 0;
    double sum = 0, sumsq = 0;
  };
  std::map<std::vector<int64_t>, Acc> buckets;
  const double drift = (w.p - w.q) * static_cast<double>(T);
  const auto n = static_cast<double>(g.n);

  for (int64_t tr = 0; tr < trials; ++tr) {
    Tracker t(g, w, 0, derive_seed(seed, static_cast<uint64_t>(tr)));
    for (int64_t s = 0; s < T; ++s) t.step();
    t.settle_pending();
    auto y = t.traffic();
    double center = drift;
    for (size_t i = 0; i < y.size(); ++i)
      center += static_cast<double>(y[i]) * static_cast<double>(g.lengths[i]);
    double off = std::fmod(static_cast<double>(t.pos) - center, n);
    if (off <= -n / 2) off += n;
    if (off > n / 2) off -= n;
    auto& acc = buckets[y];
    ++acc.count;
    acc.sum += off;
    acc.sumsq += off * off;
  }

  std::vector<SpreadBucket> out;
  out.reserve(buckets.size());
  for (auto& [y, acc] : buckets) {
    SpreadBucket b;
    b.y = y;
    b.count = acc.count;
    b.mean_offset = acc.sum / static_cast<double>(acc.count);
    double var = acc.sumsq / static_cast<double>(acc.count) -
                 b.mean_offset * b.mean_offset;
    b.sd_offset = var > 0 ? std::sqrt(var) : 0.0;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace ringmix
