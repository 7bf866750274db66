// command line front end: build | mix | track | spread | sweep-lengths |
// sweep-positions | sorted | exponent | verify
//
// exit codes: 0 ok, 2 bad configuration/usage, 3 domain failure (not mixed,
// sweep dominated by unmixed cells, self-check failure)

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringmix/exact.hpp"
#include "ringmix/harness.hpp"
#include "ringmix/spread.hpp"
#include "ringmix/walker.hpp"

using nlohmann::ordered_json;
using namespace ringmix;

namespace {

std::vector<int64_t> parse_int_list(const std::string& s) {
  std::vector<int64_t> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stoll(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::vector<std::pair<int64_t, int64_t>> parse_edges(const std::string& s) {
  std::vector<std::pair<int64_t, int64_t>> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    std::string item = s.substr(pos, next - pos);
    size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("--edges wants u:v,u:v, got '" + item + "'");
    out.emplace_back(std::stoll(item.substr(0, colon)),
                     std::stoll(item.substr(colon + 1)));
    pos = next + 1;
  }
  return out;
}

// shared instance selection: explicit canonical line > explicit edges > sampled
struct InstanceOpts {
  int64_t n = 0;
  int k = 0;
  std::string instance;
  std::string edges;

  void add(CLI::App* cmd) {
    cmd->add_option("--n", n, "cycle size");
    cmd->add_option("--k", k, "number of matching edges");
    cmd->add_option("--instance", instance, "canonical instance line");
    cmd->add_option("--edges", edges, "hub pairs u:v,u:v");
  }

  PerturbedCycle resolve(uint64_t seed) const {
    if (!instance.empty()) return from_spec(instance);
    if (n <= 0) throw ConfigError("need --n (or --instance)");
    if (!edges.empty()) return from_pairs(n, parse_edges(edges));
    if (k == 0) return make_cycle(n);
    return sample_instance(n, k, seed);
  }
};

struct ParamOpts {
  WalkParams w;
  void add(CLI::App* cmd) {
    cmd->add_option("--p", w.p, "forward probability");
    cmd->add_option("--q", w.q, "backward probability");
    cmd->add_option("--a", w.a, "matching-edge probability at hubs");
  }
};

void emit(const std::vector<std::string>& lines, const std::string& out_path) {
  if (out_path.empty()) {
    for (const auto& l : lines) std::cout << l << '\n';
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + out_path + "'");
  for (const auto& l : lines) f << l << '\n';
}

StartSet resolve_start(const std::string& s, int64_t n) {
  if (s == "auto") return n <= 512 ? StartSet::all() : StartSet::single(0);
  return StartSet::parse(s);
}

void write_sweep_outputs(const std::vector<SweepRecord>& recs,
                         const std::string& out_path, const std::string& format) {
  if (out_path.empty()) return;
  if (format == "csv") {
    export_csv(recs, out_path);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + out_path + "'");
    for (const auto& r : recs) f << r.to_jsonl() << '\n';
  }
}

ordered_json sweep_summary(const std::vector<SweepRecord>& recs) {
  int64_t skipped = 0, mixed = 0, not_mixed = 0;
  for (const auto& r : recs) {
    if (r.skipped)
      ++skipped;
    else if (r.mixed)
      ++mixed;
    else
      ++not_mixed;
  }
  return ordered_json{{"cells", recs.size()},
                      {"skipped", skipped},
                      {"mixed", mixed},
                      {"not_mixed", not_mixed}};
}

int run_verify(uint64_t seed) {
  int fails = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << '\n';
    if (!ok) ++fails;
  };

  {
    Rng r(42);
    check(r.next() == 1546998764402558742ULL, "rng frozen stream");
  }
  {
    bool ok = true;
    for (int i = 0; i < 5 && ok; ++i) {
      PerturbedCycle g = sample_instance(400 + 37 * i, 2, derive_seed(seed, i));
      std::vector<double> col(g.n, 0.0);
      double row_err = 0;
      for (int64_t v = 0; v < g.n; ++v) {
        double rs = 0;
        for (auto [t, m] : transition_row(g, WalkParams{}, v)) {
          rs += m;
          col[t] += m;
        }
        row_err = std::max(row_err, std::abs(rs - 1.0));
      }
      for (int64_t v = 0; v < g.n; ++v)
        row_err = std::max(row_err, std::abs(col[v] - 1.0));
      ok = row_err < 1e-12;
    }
    check(ok, "doubly stochastic rows/cols");
  }
  {
    PerturbedCycle g = from_pairs(12, {{2, 7}});
    WalkParams w;
    auto P = dense_matrix(g, w);
    auto Pt = dense_power(P, g.n, 50);
    DistVector d = point_mass(g.n, 0);
    Evolver ev(g, w);
    DistVector nxt(g.n);
    for (int t = 0; t < 50; ++t) {
      ev.step(d, nxt);
      d.swap(nxt);
    }
    double err = 0;
    for (int64_t j = 0; j < g.n; ++j)
      err = std::max(err, std::abs(d[j] - Pt[j]));
    check(err < 1e-10, "stepwise matches dense powering");
  }
  {
    bool ok = true;
    for (int i = 0; i < 50 && ok; ++i) {
      PerturbedCycle g = sample_instance(3000, 1 + i % 3, derive_seed(seed, 100 + i));
      if (!check_B1(g)) continue;
      auto ts = run_track(g, WalkParams{}, 0, 2000, derive_seed(seed, 200 + i));
      if (!ts.b2_held) continue;
      int64_t rhs = ts.x0 + ts.L;
      for (int j = 0; j < g.k; ++j) rhs += ts.y[j] * g.lengths[j];
      ok = ((rhs % g.n) + g.n) % g.n == ts.endpoint;
    }
    check(ok, "endpoint identity on tracked runs");
  }
  {
    auto [pg, pj] = pg_closed_form(WalkParams{});
    auto [og, oj] = absorption_oracle(WalkParams{}, 200);
    check(std::abs(pg - og) < 1e-6 && std::abs(pj - oj) < 1e-6,
          "decision probabilities match absorption model");
  }
  return fails == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perturbed-cycle walk toolkit"};
  app.require_subcommand(1);

  uint64_t seed = 12345;
  int threads = 1;
  std::string out_path;
  std::string format = "csv";
  app.add_option("--seed", seed, "base seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for sweeps")
      ->capture_default_str();
  app.add_option("--out", out_path, "output file (default stdout/none)");
  app.add_option("--format", format, "sweep export format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();

  int rc = 0;

  // ---- build ----
  auto* cb = app.add_subcommand("build", "construct an instance and print it");
  InstanceOpts b_inst;
  b_inst.add(cb);
  cb->callback([&]() {
    PerturbedCycle g = b_inst.resolve(seed);
    ordered_json j;
    j["instance"] = serialize(g);
    j["n"] = g.n;
    j["k"] = g.k;
    j["hubs"] = g.hubs;
    j["lengths"] = g.lengths;
    j["arcs"] = g.arcs;
    j["b1_threshold"] = b1_threshold(g.n);
    j["b1"] = check_B1(g);
    emit({j.dump()}, out_path);
  });

  // ---- mix ----
  auto* cm = app.add_subcommand("mix", "mixing time / distance profile");
  InstanceOpts m_inst;
  ParamOpts m_par;
  m_inst.add(cm);
  m_par.add(cm);
  double m_eps = 0.25;
  std::string m_start = "auto";
  int64_t m_tmax = -1, m_record = -1;
  std::string m_profile;
  bool m_full = false;
  cm->add_option("--eps", m_eps, "distance threshold")->capture_default_str();
  cm->add_option("--start", m_start, "all | hubs | single:V | auto")
      ->capture_default_str();
  cm->add_option("--t-max", m_tmax, "horizon (default 50 n^2)");
  cm->add_option("--profile", m_profile, "write t,d curve to this csv");
  cm->add_option("--record-every", m_record, "profile sampling stride");
  cm->add_flag("--full", m_full, "profile the whole horizon, no early stop");
  cm->callback([&]() {
    PerturbedCycle g = m_inst.resolve(seed);
    StartSet st = resolve_start(m_start, g.n);
    int64_t tm = m_tmax >= 0 ? m_tmax : default_t_max(g.n);
    MixResult res;
    if (!m_profile.empty()) {
      int64_t rec = m_record > 0 ? m_record : std::max<int64_t>(1, tm / 4096);
      MixingProfile prof =
          distance_profile(g, m_par.w, st, tm, rec, m_full ? -1.0 : m_eps);
      std::ofstream f(m_profile, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + m_profile + "'");
      f << "t,d\n";
      for (auto [t, d] : prof.points) f << t << ',' << d << '\n';
      res = prof.result;
      res.mixed = res.last_d <= m_eps;
    } else {
      res = mixing_time(g, m_par.w, m_eps, st, tm);
    }
    ordered_json j;
    j["instance"] = serialize(g);
    j["n"] = g.n;
    j["k"] = g.k;
    j["p"] = m_par.w.p;
    j["q"] = m_par.w.q;
    j["a"] = m_par.w.a;
    j["eps"] = m_eps;
    j["start"] = st.str();
    j["mixed"] = res.mixed;
    j["tmix"] = res.mixed ? res.t : -1;
    j["last_d"] = res.last_d;
    j["t_max"] = res.t_max;
    emit({j.dump()}, out_path);
    if (!res.mixed) rc = 3;
  });

  // ---- track ----
  auto* ct = app.add_subcommand("track", "labeled trajectories / decision rates");
  InstanceOpts t_inst;
  ParamOpts t_par;
  t_inst.add(ct);
  t_par.add(ct);
  int64_t t_x0 = 0, t_L = -1, t_trials = 1;
  int t_hub = 0;
  bool t_decisions = false;
  ct->add_option("--x0", t_x0, "start vertex")->capture_default_str();
  ct->add_option("--L", t_L, "target displacement (default n^((k+2)/(k+1))/4)");
  ct->add_option("--trials", t_trials, "number of trajectories")
      ->capture_default_str();
  ct->add_flag("--decisions", t_decisions, "estimate G/J decision rates instead");
  ct->add_option("--hub", t_hub, "start hub index for --decisions")
      ->capture_default_str();
  ct->callback([&]() {
    PerturbedCycle g = t_inst.resolve(seed);
    if (t_decisions) {
      DecisionEstimate de = estimate_decisions(g, t_par.w, t_hub, t_trials, seed);
      auto [pg, pj] = pg_closed_form(t_par.w);
      ordered_json j;
      j["instance"] = serialize(g);
      j["trials"] = de.trials;
      j["g_count"] = de.g_count;
      j["j_count"] = de.j_count;
      j["backtracks"] = de.backtracks;
      j["p_g"] = de.p_g;
      j["p_j"] = de.p_j;
      j["se"] = de.se;
      j["p_g_closed_form"] = pg;
      j["p_j_closed_form"] = pj;
      emit({j.dump()}, out_path);
      return;
    }
    int64_t L = t_L;
    if (L <= 0) {
      double e = (static_cast<double>(g.k) + 2) / (static_cast<double>(g.k) + 1);
      L = std::max<int64_t>(
          1, std::llround(std::pow(static_cast<double>(g.n), e) / 4));
    }
    std::vector<std::string> lines;
    for (int64_t tr = 0; tr < t_trials; ++tr) {
      TrackStats ts = run_track(g, t_par.w, t_x0, L, derive_seed(seed, tr));
      int64_t rhs = ts.x0 + ts.L;
      for (int j = 0; j < g.k; ++j) rhs += ts.y[j] * g.lengths[j];
      ordered_json j;
      j["trial"] = tr;
      j["tau"] = ts.tau;
      j["L"] = ts.L;
      j["x0"] = ts.x0;
      j["endpoint"] = ts.endpoint;
      j["y"] = ts.y;
      j["u"] = ts.u;
      j["max_backtrack"] = ts.max_backtrack;
      j["b2_held"] = ts.b2_held;
      j["backtrack_events"] = ts.backtrack_events;
      j["identity_ok"] = ((rhs % g.n) + g.n) % g.n == ts.endpoint;
      lines.push_back(j.dump());
    }
    emit(lines, out_path);
  });

  // ---- spread ----
  auto* cs = app.add_subcommand("spread", "endpoint set geometry");
  InstanceOpts s_inst;
  s_inst.add(cs);
  int64_t s_m = -1, s_L = 0;
  double s_alpha = 0.1, s_rho = 1.0;
  std::string s_signs = "all";
  cs->add_option("--m", s_m, "box radius (default ceil(sqrt(rho) n^(1/(2k+2))))");
  cs->add_option("--L", s_L, "displacement offset")->capture_default_str();
  cs->add_option("--alpha", s_alpha, "window half-width fraction of s")
      ->capture_default_str();
  cs->add_option("--rho", s_rho, "density knob for the default m")
      ->capture_default_str();
  cs->add_option("--signs", s_signs, "sign pattern (+/- per edge) or 'all'")
      ->capture_default_str();
  cs->callback([&]() {
    PerturbedCycle g = s_inst.resolve(seed);
    if (g.k < 1) throw ConfigError("spread needs k >= 1");
    int64_t m = s_m > 0 ? s_m : default_m(g.n, g.k, s_rho);
    double s = static_cast<double>(g.n) /
               std::pow(static_cast<double>(m), static_cast<double>(g.k));
    MinDist md = min_nonzero_distance(g.lengths, g.n, m);
    auto pts = xi_set(g, s_L, m, s_signs);
    GapStats gs = gap_stats(pts, g.n);
    auto sides = both_sides_check(g, s_L, m);
    int64_t both = 0;
    for (const auto& sc : sides) both += sc.both ? 1 : 0;
    ordered_json j;
    j["instance"] = serialize(g);
    j["m"] = m;
    j["s"] = s;
    j["min_dist"] = md.dist;
    j["witness"] = md.witness;
    j["xi_count"] = pts.size();
    j["min_gap"] = gs.min_gap;
    j["max_gap"] = gs.max_gap;
    j["mean_gap"] = gs.mean_gap;
    j["both_sides_patterns"] = both;
    j["patterns_total"] = sides.size();
    if (is_prime(g.n) && s_alpha > 0)
      j["expected_window_hits"] = expected_window_hits(g.n, g.k, m, s_alpha);
    emit({j.dump()}, out_path);
  });

  // ---- shared sweep options ----
  auto add_sweep_opts = [](CLI::App* cmd, SweepOpts& so, std::string& start) {
    cmd->add_option("--eps", so.eps, "distance threshold")->capture_default_str();
    cmd->add_option("--start", start, "all | hubs | single:V")
        ->capture_default_str();
    cmd->add_option("--t-max", so.t_max, "horizon (default 50 n^2)");
    cmd->add_option("--step", so.grid_step, "grid stride")->capture_default_str();
    cmd->add_option("--store", so.store_path, "append-only jsonl store");
    cmd->add_flag("--resume", so.resume, "skip cells already in the store");
    cmd->add_option("--max-cells", so.max_cells, "stop after this many cells");
  };

  // ---- sweep-lengths ----
  auto* cl = app.add_subcommand("sweep-lengths", "t_mix over the (l1,l2) grid");
  ParamOpts l_par;
  l_par.add(cl);
  int64_t l_n = 0;
  SweepOpts l_so;
  std::string l_start = "single:0";
  cl->add_option("--n", l_n, "cycle size")->required();
  add_sweep_opts(cl, l_so, l_start);
  cl->callback([&]() {
    l_so.start = StartSet::parse(l_start);
    l_so.threads = threads;
    auto recs = sweep_lengths(l_n, l_par.w, seed, l_so);
    write_sweep_outputs(recs, out_path, format);
    ordered_json j = sweep_summary(recs);
    std::cout << j.dump() << '\n';
    if (j["mixed"] == 0 && j["cells"] > 0) rc = 3;
  });

  // ---- sweep-positions ----
  auto* cp = app.add_subcommand("sweep-positions",
                                "t_mix over edge placements at fixed lengths");
  ParamOpts p_par;
  p_par.add(cp);
  int64_t p_n = 0;
  std::string p_lengths;
  SweepOpts p_so;
  std::string p_start = "single:0";
  cp->add_option("--n", p_n, "cycle size")->required();
  cp->add_option("--lengths", p_lengths, "signed lengths l1,l2[,l3]")->required();
  add_sweep_opts(cp, p_so, p_start);
  cp->callback([&]() {
    p_so.start = StartSet::parse(p_start);
    p_so.threads = threads;
    auto recs = sweep_positions(p_n, parse_int_list(p_lengths), p_par.w, p_so);
    write_sweep_outputs(recs, out_path, format);
    ordered_json j = sweep_summary(recs);
    std::cout << j.dump() << '\n';
    if (j["mixed"] == 0 && j["cells"] > 0) rc = 3;
  });

  // ---- sorted ----
  auto* co = app.add_subcommand("sorted", "sorted scaled mixing-time curves");
  ParamOpts o_par;
  o_par.add(co);
  std::string o_ns = "200,500";
  int o_k = 2;
  SweepOpts o_so;
  std::string o_start = "single:0";
  co->add_option("--ns", o_ns, "cycle sizes")->capture_default_str();
  co->add_option("--k", o_k, "2 (grid) or 0 (control)")->capture_default_str();
  add_sweep_opts(co, o_so, o_start);
  co->callback([&]() {
    o_so.start = StartSet::parse(o_start);
    o_so.threads = threads;
    auto curves = sorted_scaled(parse_int_list(o_ns), o_k, o_par.w, seed, o_so);
    if (!out_path.empty()) {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + out_path + "'");
      f << "n,idx,scaled\n";
      for (const auto& c : curves)
        for (size_t i = 0; i < c.sorted_scaled.size(); ++i)
          f << c.n << ',' << i << ',' << c.sorted_scaled[i] << '\n';
    }
    for (const auto& c : curves) {
      ordered_json j;
      j["n"] = c.n;
      j["cells"] = c.sorted_scaled.size();
      if (!c.sorted_scaled.empty()) {
        j["q05"] = curve_quantile(c, 0.05);
        j["q50"] = curve_quantile(c, 0.50);
        j["q80"] = curve_quantile(c, 0.80);
      }
      std::cout << j.dump() << '\n';
    }
  });

  // ---- exponent ----
  auto* ce = app.add_subcommand("exponent", "log-log slope of median t_mix");
  ParamOpts e_par;
  e_par.add(ce);
  int e_k = 1, e_instances = 5;
  std::string e_ns = "500,1000,2000";
  SweepOpts e_so;
  std::string e_start = "single:0";
  ce->add_option("--k", e_k, "number of matching edges")->capture_default_str();
  ce->add_option("--ns", e_ns, "cycle sizes (>= 3)")->capture_default_str();
  ce->add_option("--instances", e_instances, "instances per size (>= 5)")
      ->capture_default_str();
  add_sweep_opts(ce, e_so, e_start);
  ce->callback([&]() {
    e_so.start = StartSet::parse(e_start);
    e_so.threads = threads;
    FitSummary fs = exponent_campaign(e_k, parse_int_list(e_ns), e_instances,
                                      e_par.w, seed, e_so);
    ordered_json j;
    j["k"] = fs.k;
    j["ns"] = fs.ns;
    j["medians"] = fs.medians;
    j["slope"] = fs.fit.slope;
    j["intercept"] = fs.fit.intercept;
    j["residual"] = fs.fit.residual;
    j["not_mixed_fraction"] = fs.not_mixed_fraction;
    j["dominated"] = fs.dominated;
    emit({j.dump()}, out_path);
    if (fs.dominated) rc = 3;
  });

  // ---- verify ----
  auto* cv = app.add_subcommand("verify", "quick self-consistency checks");
  cv->callback([&]() { rc = run_verify(seed); });

  // let --seed/--threads/--out/--format appear after the subcommand too
  for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const RunError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
