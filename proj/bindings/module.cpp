#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ringmix/exact.hpp"
#include "ringmix/harness.hpp"
#include "ringmix/spread.hpp"
#include "ringmix/walker.hpp"

namespace py = pybind11;
using namespace ringmix;

namespace {

py::dict mix_result_dict(const MixResult& r) {
  py::dict d;
  d["mixed"] = r.mixed;
  d["t"] = r.t;
  d["last_d"] = r.last_d;
  d["t_max"] = r.t_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "perturbed-cycle non-reversible walk toolkit";
  m.attr("__version__") = kVersion;
  m.attr("RNG_ID") = kRngId;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<RunError>(m, "RunError", PyExc_RuntimeError);

  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));

  py::class_<PerturbedCycle>(m, "PerturbedCycle")
      .def_readonly("n", &PerturbedCycle::n)
      .def_readonly("k", &PerturbedCycle::k)
      .def_readonly("hubs", &PerturbedCycle::hubs)
      .def_readonly("match", &PerturbedCycle::match)
      .def_readonly("edges", &PerturbedCycle::edges)
      .def_readonly("lengths", &PerturbedCycle::lengths)
      .def_readonly("arcs", &PerturbedCycle::arcs)
      .def("hub_index", &PerturbedCycle::hub_index, py::arg("v"))
      .def("__eq__", [](const PerturbedCycle& a, const PerturbedCycle& b) { return a == b; })
      .def("__repr__", [](const PerturbedCycle& g) { return serialize(g); });

  m.def("make_cycle", &make_cycle, py::arg("n"));
  m.def("from_pairs", &from_pairs, py::arg("n"), py::arg("hub_pairs"));
  m.def("sample_instance", &sample_instance, py::arg("n"), py::arg("k"),
        py::arg("seed"));
  m.def("serialize", &serialize, py::arg("g"));
  m.def("from_spec", &from_spec, py::arg("line"));
  m.def("signed_length", &signed_length, py::arg("delta"), py::arg("n"));
  m.def("b1_threshold", &b1_threshold, py::arg("n"));
  m.def("check_B1", &check_B1, py::arg("g"), py::arg("threshold") = -1.0);

  py::class_<WalkParams>(m, "WalkParams")
      .def(py::init([](double p, double q, double a) {
             WalkParams w{p, q, a};
             validate_params(w);
             return w;
           }),
           py::arg("p") = 0.5, py::arg("q") = 0.25, py::arg("a") = 0.25)
      .def_readwrite("p", &WalkParams::p)
      .def_readwrite("q", &WalkParams::q)
      .def_readwrite("a", &WalkParams::a);

  m.def("transition_row", &transition_row, py::arg("g"), py::arg("w"),
        py::arg("v"));
  m.def("point_mass", &point_mass, py::arg("n"), py::arg("v"));
  m.def("uniform_dist", &uniform_dist, py::arg("n"));
  m.def("step_distribution", &step_distribution, py::arg("g"), py::arg("w"),
        py::arg("d"));
  m.def("tv_distance", &tv_distance, py::arg("d1"), py::arg("d2"));
  m.def("tv_to_uniform", &tv_to_uniform, py::arg("d"));
  m.def("default_t_max", &default_t_max, py::arg("n"));

  m.def(
      "mixing_time",
      [](const PerturbedCycle& g, const WalkParams& w, double eps,
         const std::string& start, int64_t t_max) {
        MixResult r = [&] {
          py::gil_scoped_release rel;
          return mixing_time(g, w, eps, StartSet::parse(start), t_max);
        }();
        return mix_result_dict(r);
      },
      py::arg("g"), py::arg("w") = WalkParams{}, py::arg("eps") = 0.25,
      py::arg("start") = "single:0", py::arg("t_max") = -1);

  m.def(
      "distance_profile",
      [](const PerturbedCycle& g, const WalkParams& w, const std::string& start,
         int64_t t_max, int64_t record_every, double eps_stop) {
        MixingProfile prof = [&] {
          py::gil_scoped_release rel;
          return distance_profile(g, w, StartSet::parse(start), t_max,
                                  record_every, eps_stop);
        }();
        py::dict d;
        d["points"] = prof.points;
        d["result"] = mix_result_dict(prof.result);
        d["eps"] = prof.eps;
        return d;
      },
      py::arg("g"), py::arg("w") = WalkParams{}, py::arg("start") = "single:0",
      py::arg("t_max") = -1, py::arg("record_every") = -1,
      py::arg("eps_stop") = -1.0);

  m.def(
      "exponent_fit",
      [](const std::vector<std::pair<double, double>>& pts) {
        ExpFit f = exponent_fit(pts);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["residual"] = f.residual;
        return d;
      },
      py::arg("n_t_points"));

  py::class_<TrackStats>(m, "TrackStats")
      .def_readonly("tau", &TrackStats::tau)
      .def_readonly("L", &TrackStats::L)
      .def_readonly("max_backtrack", &TrackStats::max_backtrack)
      .def_readonly("n_g", &TrackStats::n_g)
      .def_readonly("n_j", &TrackStats::n_j)
      .def_readonly("y", &TrackStats::y)
      .def_readonly("u", &TrackStats::u)
      .def_readonly("x0", &TrackStats::x0)
      .def_readonly("endpoint", &TrackStats::endpoint)
      .def_readonly("b2_held", &TrackStats::b2_held)
      .def_readonly("b2_threshold", &TrackStats::b2_threshold)
      .def_readonly("backtrack_events", &TrackStats::backtrack_events);

  m.def("run_track", &run_track, py::arg("g"), py::arg("w"), py::arg("x0"),
        py::arg("L"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "estimate_decisions",
      [](const PerturbedCycle& g, const WalkParams& w, int hub, int64_t trials,
         uint64_t seed) {
        DecisionEstimate de = [&] {
          py::gil_scoped_release rel;
          return estimate_decisions(g, w, hub, trials, seed);
        }();
        py::dict d;
        d["trials"] = de.trials;
        d["g_count"] = de.g_count;
        d["j_count"] = de.j_count;
        d["backtracks"] = de.backtracks;
        d["p_g"] = de.p_g;
        d["p_j"] = de.p_j;
        d["se"] = de.se;
        return d;
      },
      py::arg("g"), py::arg("w"), py::arg("hub"), py::arg("trials"),
      py::arg("seed"));

  m.def("pg_closed_form", &pg_closed_form, py::arg("w"));
  m.def("absorption_oracle", &absorption_oracle, py::arg("w"), py::arg("arm"));
  m.def(
      "gambler_facts",
      [](const WalkParams& w) {
        GamblerFacts f = gambler_facts(w);
        py::dict d;
        d["q_over_p"] = f.q_over_p;
        d["expected_tau1"] = f.expected_tau1;
        return d;
      },
      py::arg("w"));
  m.def(
      "escape_prob",
      [](const WalkParams& w, int b) { return gambler_facts(w).escape_prob(b); },
      py::arg("w"), py::arg("b"));

  m.def(
      "conditional_endpoint_spread",
      [](const PerturbedCycle& g, const WalkParams& w, int64_t T, int64_t trials,
         uint64_t seed) {
        auto buckets = [&] {
          py::gil_scoped_release rel;
          return conditional_endpoint_spread(g, w, T, trials, seed);
        }();
        py::list out;
        for (const auto& b : buckets) {
          py::dict d;
          d["y"] = b.y;
          d["count"] = b.count;
          d["mean_offset"] = b.mean_offset;
          d["sd_offset"] = b.sd_offset;
          out.append(d);
        }
        return out;
      },
      py::arg("g"), py::arg("w"), py::arg("T"), py::arg("trials"),
      py::arg("seed"));

  m.def("f_l", &f_l, py::arg("y"), py::arg("l"), py::arg("n"));
  m.def(
      "min_nonzero_distance",
      [](const std::vector<int64_t>& l, int64_t n, int64_t m_) {
        MinDist md = min_nonzero_distance(l, n, m_);
        return py::make_tuple(md.dist, md.witness);
      },
      py::arg("l"), py::arg("n"), py::arg("m"));
  m.def("is_prime", &is_prime, py::arg("n"));
  m.def("expected_window_hits", &expected_window_hits, py::arg("n"),
        py::arg("k"), py::arg("m"), py::arg("alpha"));
  m.def("xi_set", &xi_set, py::arg("g"), py::arg("L"), py::arg("m"),
        py::arg("signs") = "all");
  m.def(
      "gap_stats",
      [](const std::vector<int64_t>& points, int64_t n) {
        GapStats gs = gap_stats(points, n);
        py::dict d;
        d["min_gap"] = gs.min_gap;
        d["max_gap"] = gs.max_gap;
        d["mean_gap"] = gs.mean_gap;
        d["gaps"] = gs.gaps;
        return d;
      },
      py::arg("points"), py::arg("n"));
  m.def(
      "both_sides_check",
      [](const PerturbedCycle& g, int64_t L, int64_t m_) {
        py::list out;
        for (const auto& sc : both_sides_check(g, L, m_)) {
          py::dict d;
          d["pattern"] = sc.pattern;
          d["both"] = sc.both;
          d["c_min"] = sc.c_min;
          d["pos_min"] = sc.pos_min;
          d["neg_min"] = sc.neg_min;
          out.append(d);
        }
        return out;
      },
      py::arg("g"), py::arg("L"), py::arg("m"));
  m.def("default_m", &default_m, py::arg("n"), py::arg("k"),
        py::arg("rho") = 1.0);

  m.def(
      "exponent_campaign",
      [](int k, const std::vector<int64_t>& ns, int instances_per_n,
         const WalkParams& w, uint64_t seed, double eps, int threads) {
        SweepOpts so;
        so.eps = eps;
        so.threads = threads;
        FitSummary fs = [&] {
          py::gil_scoped_release rel;
          return exponent_campaign(k, ns, instances_per_n, w, seed, so);
        }();
        py::dict d;
        d["k"] = fs.k;
        d["ns"] = fs.ns;
        d["medians"] = fs.medians;
        d["slope"] = fs.fit.slope;
        d["intercept"] = fs.fit.intercept;
        d["residual"] = fs.fit.residual;
        d["not_mixed_fraction"] = fs.not_mixed_fraction;
        d["dominated"] = fs.dominated;
        return d;
      },
      py::arg("k"), py::arg("ns"), py::arg("instances_per_n"), py::arg("w"),
      py::arg("seed"), py::arg("eps") = 0.25, py::arg("threads") = 1);
}
