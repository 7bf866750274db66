#include "ringmix/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "ringmix/rng.hpp"

namespace ringmix {

int PerturbedCycle::hub_index(int64_t v) const {
  auto it = std::lower_bound(hubs.begin(), hubs.end(), v);
  if (it != hubs.end() && *it == v) return static_cast<int>(it - hubs.begin());
  return -1;
}

int64_t signed_length(int64_t delta, int64_t n) {
  int64_t d = delta % n;
  if (d < 0) d += n;
  return 2 * d > n ? d - n : d;
}

namespace {

void derive_and_validate(PerturbedCycle& g) {
  const int64_t n = g.n;
  const int k = g.k;
  if (n < 3) throw ConfigError("n must be at least 3");
  if (k < 0) throw ConfigError("k must be non-negative");
  if (n < 2 * k) throw ConfigError("n < 2k: not enough vertices for the hubs");
  if (static_cast<int>(g.hubs.size()) != 2 * k)
    throw ConfigError("expected exactly 2k hubs");
  for (int j = 0; j < 2 * k; ++j) {
    if (g.hubs[j] < 0 || g.hubs[j] >= n) throw ConfigError("hub out of range");
    if (j > 0 && g.hubs[j] <= g.hubs[j - 1])
      throw ConfigError("hubs must be strictly increasing and distinct");
  }
  if (static_cast<int>(g.match.size()) != 2 * k)
    throw ConfigError("matching size mismatch");
  for (int j = 0; j < 2 * k; ++j) {
    int mj = g.match[j];
    if (mj < 0 || mj >= 2 * k || mj == j || g.match[mj] != j)
      throw ConfigError("matching is not a fixed-point-free involution");
  }

  g.edges.clear();
  g.edges.reserve(k);
  for (int j = 0; j < 2 * k; ++j)
    if (j < g.match[j]) g.edges.push_back({j, g.match[j]});
  // edges come out ordered by lower hub index because j runs ascending

  g.lengths.clear();
  g.lengths.reserve(k);
  for (const auto& e : g.edges)
    g.lengths.push_back(signed_length(g.hubs[e[1]] - g.hubs[e[0]], n));

  g.arcs.clear();
  g.arcs.reserve(2 * k);
  for (int j = 0; j < 2 * k; ++j) {
    int64_t next = g.hubs[(j + 1) % (2 * k)];
    int64_t gap = next - g.hubs[j];
    if (gap <= 0) gap += n;
    g.arcs.push_back(gap);
  }
}

}  // namespace

PerturbedCycle make_cycle(int64_t n) {
  PerturbedCycle g;
  g.n = n;
  g.k = 0;
  if (n < 3) throw ConfigError("n must be at least 3");
  return g;
}

PerturbedCycle from_pairs(int64_t n,
                          const std::vector<std::pair<int64_t, int64_t>>& hub_pairs) {
  PerturbedCycle g;
  g.n = n;
  g.k = static_cast<int>(hub_pairs.size());
  if (g.k == 0) return make_cycle(n);

  std::vector<std::pair<int64_t, int>> verts;  // (vertex, pair id)
  int id = 0;
  for (const auto& [u, v] : hub_pairs) {
    verts.emplace_back(u, id);
    verts.emplace_back(v, id);
    ++id;
  }
  std::sort(verts.begin(), verts.end());
  for (size_t i = 1; i < verts.size(); ++i)
    if (verts[i].first == verts[i - 1].first)
      throw ConfigError("duplicate hub vertex");

  g.hubs.resize(2 * g.k);
  g.match.assign(2 * g.k, -1);
  std::vector<int> first_of_pair(g.k, -1);
  for (int j = 0; j < 2 * g.k; ++j) {
    g.hubs[j] = verts[j].first;
    int pid = verts[j].second;
    if (first_of_pair[pid] < 0) {
      first_of_pair[pid] = j;
    } else {
      g.match[first_of_pair[pid]] = j;
      g.match[j] = first_of_pair[pid];
    }
  }
  derive_and_validate(g);
  return g;
}

PerturbedCycle sample_instance(int64_t n, int k, uint64_t seed) {
  if (n < 3 || k < 0 || n < 2 * k)
    throw ConfigError("sample_instance requires n >= max(3, 2k)");
  if (k == 0) return make_cycle(n);

  Rng rng(seed);
  // distinct uniform 2k-subset by rejection (2k << n in every supported use)
  std::unordered_set<int64_t> seen;
  std::vector<int64_t> hubs;
  hubs.reserve(2 * k);
  while (static_cast<int>(hubs.size()) < 2 * k) {
    auto v = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
    if (seen.insert(v).second) hubs.push_back(v);
  }
  std::sort(hubs.begin(), hubs.end());

  // uniform perfect matching: repeatedly pair the lowest free index with a
  // uniform choice among the remaining free ones
  std::vector<int> free_idx(2 * k);
  for (int j = 0; j < 2 * k; ++j) free_idx[j] = j;
  std::vector<int> match(2 * k, -1);
  while (!free_idx.empty()) {
    int a = free_idx.front();
    free_idx.erase(free_idx.begin());
    auto pick = static_cast<size_t>(rng.below(free_idx.size()));
    int b = free_idx[pick];
    free_idx.erase(free_idx.begin() + static_cast<ptrdiff_t>(pick));
    match[a] = b;
    match[b] = a;
  }

  PerturbedCycle g;
  g.n = n;
  g.k = k;
  g.hubs = std::move(hubs);
  g.match = std::move(match);
  derive_and_validate(g);
  return g;
}

std::string serialize(const PerturbedCycle& g) {
  std::ostringstream os;
  os << "n=" << g.n << " k=" << g.k;
  if (g.k > 0) {
    os << " hubs=";
    for (int j = 0; j < 2 * g.k; ++j) {
      if (j) os << ',';
      os << g.hubs[j];
    }
    os << " match=";
    for (size_t i = 0; i < g.edges.size(); ++i) {
      if (i) os << ',';
      os << g.edges[i][0] + 1 << ':' << g.edges[i][1] + 1;
    }
  }
  return os.str();
}

namespace {

std::vector<int64_t> parse_int_list(const std::string& s, char sep) {
  std::vector<int64_t> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    if (cur.empty()) throw ConfigError("empty element in list '" + s + "'");
    size_t pos = 0;
    int64_t v = std::stoll(cur, &pos);
    if (pos != cur.size()) throw ConfigError("bad integer '" + cur + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

PerturbedCycle from_spec(const std::string& line) {
  int64_t n = -1;
  int k = -1;
  bool have_seed = false;
  uint64_t seed = 0;
  std::string hubs_s, match_s;
  bool have_hubs = false, have_match = false;

  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("bad token '" + tok + "'");
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n") {
      n = std::stoll(val);
    } else if (key == "k") {
      k = std::stoi(val);
    } else if (key == "seed") {
      seed = std::stoull(val);
      have_seed = true;
    } else if (key == "hubs") {
      hubs_s = val;
      have_hubs = true;
    } else if (key == "match") {
      match_s = val;
      have_match = true;
    } else {
      throw ConfigError("unknown instance field '" + key + "'");
    }
  }
  if (n < 0 || k < 0) throw ConfigError("instance needs n= and k=");
  if (have_seed) {
    if (have_hubs || have_match)
      throw ConfigError("give either seed= or hubs=/match=, not both");
    return sample_instance(n, k, seed);
  }
  if (k == 0) return make_cycle(n);
  if (!have_hubs || !have_match)
    throw ConfigError("explicit instance needs hubs= and match=");

  PerturbedCycle g;
  g.n = n;
  g.k = k;
  g.hubs = parse_int_list(hubs_s, ',');
  g.match.assign(2 * k, -1);
  std::istringstream ms(match_s);
  std::string pair_s;
  while (std::getline(ms, pair_s, ',')) {
    auto colon = pair_s.find(':');
    if (colon == std::string::npos)
      throw ConfigError("bad match pair '" + pair_s + "'");
    int a = std::stoi(pair_s.substr(0, colon)) - 1;  // 1-based on the wire
    int b = std::stoi(pair_s.substr(colon + 1)) - 1;
    if (a < 0 || b < 0 || a >= 2 * k || b >= 2 * k || a == b)
      throw ConfigError("match index out of range in '" + pair_s + "'");
    if (g.match[a] != -1 || g.match[b] != -1)
      throw ConfigError("hub matched twice");
    g.match[a] = b;
    g.match[b] = a;
  }
  derive_and_validate(g);
  return g;
}

double b1_threshold(int64_t n) {
  double ln = std::log(static_cast<double>(n));
  return ln * ln;
}

bool check_B1(const PerturbedCycle& g, double threshold) {
  if (threshold < 0) threshold = b1_threshold(g.n);
  for (int64_t a : g.arcs)
    if (static_cast<double>(a) <= threshold) return false;
  return true;
}

}  // namespace ringmix
