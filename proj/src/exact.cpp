#include "ringmix/exact.hpp"

namespace ringmix {

std::vector<double> dense_matrix(const PerturbedCycle& g, const WalkParams& w) {
  const auto n = static_cast<size_t>(g.n);
  std::vector<double> P(n * n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (const auto& [t, m] : transition_row(g, w, static_cast<int64_t>(i)))
      P[i * n + static_cast<size_t>(t)] += m;
  return P;
}

void dense_step(const std::vector<double>& P, int64_t n, DistVector& d) {
  const auto nn = static_cast<size_t>(n);
  DistVector out(nn, 0.0);
  for (size_t i = 0; i < nn; ++i) {
    double di = d[i];
    if (di == 0.0) continue;
    for (size_t j = 0; j < nn; ++j) out[j] += di * P[i * nn + j];
  }
  d = std::move(out);
}

std::vector<double> dense_power(const std::vector<double>& P, int64_t n,
                                int64_t t) {
  const auto nn = static_cast<size_t>(n);
  std::vector<double> R(nn * nn, 0.0);
  for (size_t i = 0; i < nn; ++i) R[i * nn + i] = 1.0;
  for (int64_t s = 0; s < t; ++s) {
    std::vector<double> next(nn * nn, 0.0);
    for (size_t i = 0; i < nn; ++i)
      for (size_t l = 0; l < nn; ++l) {
        double r = R[i * nn + l];
        if (r == 0.0) continue;
        for (size_t j = 0; j < nn; ++j) next[i * nn + j] += r * P[l * nn + j];
      }
    R = std::move(next);
  }
  return R;
}

std::vector<Rat> dense_matrix_exact(const PerturbedCycle& g, const RatParams& w) {
  if (!(w.p > w.q && w.q >= 0 && w.a >= 0 && w.p + w.q + w.a <= 1))
    throw ConfigError("invalid rational params");
  const auto n = static_cast<size_t>(g.n);
  std::vector<Rat> P(n * n, Rat(0));
  for (size_t i = 0; i < n; ++i) {
    auto v = static_cast<int64_t>(i);
    int hj = g.hub_index(v);
    Rat loop = 1 - w.p - w.q - (hj >= 0 ? w.a : Rat(0));
    P[i * n + static_cast<size_t>((v + 1) % g.n)] += w.p;
    P[i * n + static_cast<size_t>((v + g.n - 1) % g.n)] += w.q;
    if (hj >= 0) P[i * n + static_cast<size_t>(g.hubs[g.match[hj]])] += w.a;
    P[i * n + i] += loop;
  }
  return P;
}

std::vector<Rat> rat_point_mass(int64_t n, int64_t v) {
  std::vector<Rat> d(static_cast<size_t>(n), Rat(0));
  d[static_cast<size_t>(v)] = 1;
  return d;
}

void rat_step(const std::vector<Rat>& P, int64_t n, std::vector<Rat>& d) {
  const auto nn = static_cast<size_t>(n);
  std::vector<Rat> out(nn, Rat(0));
  for (size_t i = 0; i < nn; ++i) {
    if (d[i] == 0) continue;
    for (size_t j = 0; j < nn; ++j) out[j] += d[i] * P[i * nn + j];
  }
  d = std::move(out);
}

Rat rat_tv_to_uniform(const std::vector<Rat>& d) {
  Rat pi(1, static_cast<int64_t>(d.size()));
  Rat acc(0);
  for (const Rat& x : d) acc += boost::multiprecision::abs(x - pi);
  return acc / 2;
}

}  // namespace ringmix
