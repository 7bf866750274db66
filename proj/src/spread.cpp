#include "ringmix/spread.hpp"

#include <algorithm>
#include <cmath>

namespace ringmix {

namespace {

constexpr int64_t kEnumGuard = 100'000'000;

// total points in a box with `width` values per coordinate
int64_t box_size_guarded(int64_t width, int k) {
  int64_t total = 1;
  for (int i = 0; i < k; ++i) {
    if (total > kEnumGuard / width)
      throw ConfigError("enumeration guard exceeded (box too large)");
    total *= width;
  }
  return total;
}

// odometer over y_i in [lo_i, hi_i]; calls fn(y) for every point
template <typename Fn>
void enumerate_box(const std::vector<int64_t>& lo, const std::vector<int64_t>& hi,
                   Fn&& fn) {
  const size_t k = lo.size();
  std::vector<int64_t> y(lo);
  if (k == 0) {
    fn(y);
    return;
  }
  for (;;) {
    fn(y);
    size_t i = 0;
    while (i < k) {
      if (y[i] < hi[i]) {
        ++y[i];
        break;
      }
      y[i] = lo[i];
      ++i;
    }
    if (i == k) return;
  }
}

}  // namespace

int64_t f_l(const std::vector<int64_t>& y, const std::vector<int64_t>& l,
            int64_t n) {
  if (y.size() != l.size()) throw ConfigError("f_l: length mismatch");
  __int128 acc = 0;
  for (size_t i = 0; i < y.size(); ++i)
    acc += static_cast<__int128>(y[i]) * l[i];
  auto r = static_cast<int64_t>(acc % n);
  return r < 0 ? r + n : r;
}

MinDist min_nonzero_distance(const std::vector<int64_t>& l, int64_t n, int64_t m) {
  if (m < 1) throw ConfigError("m must be >= 1");
  const int k = static_cast<int>(l.size());
  box_size_guarded(2 * m + 1, k);

  MinDist best;
  best.dist = n;  // larger than any cyclic distance
  std::vector<int64_t> lo(l.size(), -m), hi(l.size(), m);
  enumerate_box(lo, hi, [&](const std::vector<int64_t>& y) {
    bool zero = true;
    for (int64_t v : y)
      if (v != 0) {
        zero = false;
        break;
      }
    if (zero) return;
    int64_t f = f_l(y, l, n);
    int64_t d = std::min(f, n - f);
    if (d < best.dist) {
      best.dist = d;
      best.witness = y;
    }
  });
  return best;
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

double expected_window_hits(int64_t n, int k, int64_t m, double alpha) {
  if (!is_prime(n)) throw ConfigError("expected_window_hits needs a prime n");
  if (!(alpha > 0)) throw ConfigError("alpha must be positive");
  if (m < 1 || k < 1) throw ConfigError("need m >= 1 and k >= 1");
  double s = static_cast<double>(n) / std::pow(static_cast<double>(m), k);
  double pts = std::pow(2.0 * static_cast<double>(m) + 1.0, k) - 1.0;
  double window = 2.0 * std::floor(alpha * s) + 1.0;
  return pts * window / static_cast<double>(n);
}

std::vector<int64_t> xi_set(const PerturbedCycle& g, int64_t L, int64_t m,
                            const std::string& signs) {
  if (m < 1) throw ConfigError("m must be >= 1");
  const int k = g.k;
  std::vector<int64_t> lo(static_cast<size_t>(k)), hi(static_cast<size_t>(k));
  if (signs == "all") {
    box_size_guarded(2 * m - 1, k);
    for (int i = 0; i < k; ++i) {
      lo[static_cast<size_t>(i)] = -(m - 1);
      hi[static_cast<size_t>(i)] = m - 1;
    }
  } else {
    if (static_cast<int>(signs.size()) != k)
      throw ConfigError("sign pattern must have one char per edge");
    box_size_guarded(m, k);
    for (int i = 0; i < k; ++i) {
      char c = signs[static_cast<size_t>(i)];
      if (c == '+') {
        lo[static_cast<size_t>(i)] = 0;
        hi[static_cast<size_t>(i)] = m - 1;
      } else if (c == '-') {
        lo[static_cast<size_t>(i)] = -(m - 1);
        hi[static_cast<size_t>(i)] = 0;
      } else {
        throw ConfigError("sign pattern chars must be '+' or '-'");
      }
    }
  }

  std::vector<int64_t> pts;
  enumerate_box(lo, hi, [&](const std::vector<int64_t>& y) {
    int64_t f = f_l(y, g.lengths, g.n);
    int64_t v = (f + L) % g.n;
    if (v < 0) v += g.n;
    pts.push_back(v);
  });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

GapStats gap_stats(const std::vector<int64_t>& points, int64_t n) {
  if (points.empty()) throw ConfigError("gap_stats needs a non-empty set");
  std::vector<int64_t> pts(points);
  std::sort(pts.begin(), pts.end());
  if (pts.front() < 0 || pts.back() >= n)
    throw ConfigError("points must lie in [0, n)");

  GapStats gs;
  gs.gaps.reserve(pts.size());
  for (size_t i = 0; i + 1 < pts.size(); ++i) gs.gaps.push_back(pts[i + 1] - pts[i]);
  gs.gaps.push_back(n - pts.back() + pts.front());  // wrap
  gs.min_gap = *std::min_element(gs.gaps.begin(), gs.gaps.end());
  gs.max_gap = *std::max_element(gs.gaps.begin(), gs.gaps.end());
  gs.mean_gap = static_cast<double>(n) / static_cast<double>(pts.size());
  return gs;
}

std::vector<SideCheck> both_sides_check(const PerturbedCycle& g, int64_t L,
                                        int64_t m) {
  if (m < 1) throw ConfigError("m must be >= 1");
  const int k = g.k;
  if (k < 1) throw ConfigError("both_sides_check needs k >= 1");
  box_size_guarded(m, k);
  double s = static_cast<double>(g.n) / std::pow(static_cast<double>(m), k);

  std::vector<SideCheck> out;
  for (int mask = 0; mask < (1 << k); ++mask) {
    SideCheck sc;
    std::vector<int64_t> lo(static_cast<size_t>(k)), hi(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
      bool plus = !(mask & (1 << i));
      sc.pattern.push_back(plus ? 1 : -1);
      lo[static_cast<size_t>(i)] = plus ? 0 : -(m - 1);
      hi[static_cast<size_t>(i)] = plus ? m - 1 : 0;
    }
    enumerate_box(lo, hi, [&](const std::vector<int64_t>& y) {
      int64_t f = (f_l(y, g.lengths, g.n) + L) % g.n;
      if (f < 0) f += g.n;
      int64_t sf = signed_length(f, g.n);
      if (sf > 0 && (sc.pos_min < 0 || sf < sc.pos_min)) sc.pos_min = sf;
      if (sf < 0 && (sc.neg_min < 0 || -sf < sc.neg_min)) sc.neg_min = -sf;
    });
    sc.both = sc.pos_min > 0 && sc.neg_min > 0;
    if (sc.both)
      sc.c_min = static_cast<double>(std::max(sc.pos_min, sc.neg_min)) / s;
    out.push_back(std::move(sc));
  }
  return out;
}

int64_t default_m(int64_t n, int k, double rho) {
  double v = std::sqrt(rho) *
             std::pow(static_cast<double>(n), 1.0 / (2.0 * k + 2.0));
  auto m = static_cast<int64_t>(std::ceil(v));
  return std::max<int64_t>(m, 1);
}

}  // namespace ringmix
