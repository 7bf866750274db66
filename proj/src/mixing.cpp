#include "ringmix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ringmix {

StartSet StartSet::parse(const std::string& s) {
  if (s == "all") return all();
  if (s == "hubs") return hubs();
  if (s.rfind("single:", 0) == 0) return single(std::stoll(s.substr(7)));
  throw ConfigError("bad start set '" + s + "' (all|hubs|single:V)");
}

std::vector<int64_t> StartSet::vertices(const PerturbedCycle& g) const {
  switch (mode) {
    case Mode::All: {
      std::vector<int64_t> out(static_cast<size_t>(g.n));
      for (int64_t i = 0; i < g.n; ++i) out[static_cast<size_t>(i)] = i;
      return out;
    }
    case Mode::Hubs: {
      if (g.k == 0) throw ConfigError("start set 'hubs' needs k >= 1");
      std::set<int64_t> s;
      for (int64_t h : g.hubs) {
        s.insert(h);
        s.insert((h + 1) % g.n);
        s.insert((h + g.n - 1) % g.n);
      }
      return {s.begin(), s.end()};
    }
    case Mode::Single:
      if (v < 0 || v >= g.n) throw ConfigError("start vertex out of range");
      return {v};
  }
  return {};
}

std::string StartSet::str() const {
  switch (mode) {
    case Mode::All:
      return "all";
    case Mode::Hubs:
      return "hubs";
    case Mode::Single:
      return "single:" + std::to_string(v);
  }
  return "";
}

double tv_distance(const DistVector& d1, const DistVector& d2) {
  if (d1.size() != d2.size()) throw ConfigError("distribution length mismatch");
  double acc = 0;
  for (size_t i = 0; i < d1.size(); ++i) acc += std::abs(d1[i] - d2[i]);
  return 0.5 * acc;
}

double tv_to_uniform(const DistVector& d) {
  const double pi = 1.0 / static_cast<double>(d.size());
  double acc = 0;
  for (double x : d) acc += std::abs(x - pi);
  return 0.5 * acc;
}

int64_t default_t_max(int64_t n) { return 50 * n * n; }

namespace {

struct Ensemble {
  Ensemble(const PerturbedCycle& g, const WalkParams& w, const StartSet& starts)
      : ev(g, w) {
    for (int64_t v : starts.vertices(g)) cur.push_back(point_mass(g.n, v));
    nxt.resize(cur.size());
  }

  void step_all() {
    for (size_t s = 0; s < cur.size(); ++s) ev.step(cur[s], nxt[s]);
    cur.swap(nxt);
  }

  double dist() const {
    double d = 0;
    for (const auto& v : cur) d = std::max(d, tv_to_uniform(v));
    return d;
  }

  Evolver ev;
  std::vector<DistVector> cur, nxt;
};

}  // namespace

MixingProfile distance_profile(const PerturbedCycle& g, const WalkParams& w,
                               const StartSet& starts, int64_t t_max,
                               int64_t record_every, double eps_stop) {
  if (t_max < 1) throw ConfigError("t_max must be >= 1");
  if (record_every < 1) record_every = 1;
  Ensemble e(g, w, starts);
  MixingProfile prof;
  prof.eps = eps_stop;
  prof.result.t_max = t_max;

  double d = e.dist();
  prof.points.emplace_back(0, d);
  if (eps_stop > 0 && d <= eps_stop) {
    prof.result = {true, 0, d, t_max};
    return prof;
  }
  for (int64_t t = 1; t <= t_max; ++t) {
    e.step_all();
    if (t % record_every == 0 || t == t_max) {
      d = e.dist();
      prof.points.emplace_back(t, d);
      if (eps_stop > 0 && d <= eps_stop) {
        prof.result = {true, t, d, t_max};
        return prof;
      }
    }
  }
  prof.result = {false, t_max, d, t_max};
  return prof;
}

MixResult mixing_time(const PerturbedCycle& g, const WalkParams& w, double eps,
                      const StartSet& starts, int64_t t_max) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must be in (0,1)");
  if (t_max < 0) t_max = default_t_max(g.n);
  if (t_max < 1) throw ConfigError("t_max must be >= 1");

  Ensemble e(g, w, starts);
  double d = e.dist();
  if (d <= eps) return {true, 0, d, t_max};

  constexpr int64_t kStride = 8;
  std::vector<DistVector> chk = e.cur;
  int64_t chk_t = 0;
  int64_t t = 0;
  while (t < t_max) {
    int64_t burst = std::min(kStride, t_max - t);
    for (int64_t i = 0; i < burst; ++i) e.step_all();
    t += burst;
    d = e.dist();
    if (d <= eps) {
      // replay from the checkpoint to find the exact first crossing;
      // d is monotone, so it lies in (chk_t, t]
      e.cur = chk;
      for (int64_t tt = chk_t + 1; tt < t; ++tt) {
        e.step_all();
        double dd = e.dist();
        if (dd <= eps) return {true, tt, dd, t_max};
      }
      return {true, t, d, t_max};
    }
    chk = e.cur;
    chk_t = t;
  }
  return {false, t_max, d, t_max};
}

ExpFit exponent_fit(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) throw ConfigError("exponent_fit needs >= 3 points");
  std::set<double> uniq;
  for (const auto& [n, t] : pts) {
    if (!(n > 0) || !(t > 0)) throw ConfigError("exponent_fit needs positive points");
    uniq.insert(n);
  }
  if (uniq.size() < 3) throw ConfigError("exponent_fit needs >= 3 distinct n");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto m = static_cast<double>(pts.size());
  for (const auto& [n, t] : pts) {
    double x = std::log(n), y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = m * sxx - sx * sx;
  ExpFit f;
  f.slope = (m * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / m;
  double ss = 0;
  for (const auto& [n, t] : pts) {
    double r = std::log(t) - (f.slope * std::log(n) + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / m);
  return f;
}

}  // namespace ringmix
