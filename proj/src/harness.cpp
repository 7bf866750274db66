#include "ringmix/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "ringmix/rng.hpp"

namespace ringmix {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string SweepRecord::key() const {
  std::string s = kind;
  s += '|';
  s += std::to_string(n) + '|' + std::to_string(k) + '|' + std::to_string(x) +
       '|' + std::to_string(y) + '|' + instance + '|' + fmt_double(p) + '|' +
       fmt_double(q) + '|' + fmt_double(a) + '|' + fmt_double(eps) + '|' + start;
  return s;
}

std::string SweepRecord::to_jsonl() const {
  nlohmann::ordered_json j;
  j["schema"] = schema;
  j["kind"] = kind;
  j["n"] = n;
  j["k"] = k;
  j["x"] = x;
  j["y"] = y;
  j["instance"] = instance;
  j["p"] = p;
  j["q"] = q;
  j["a"] = a;
  j["eps"] = eps;
  j["start"] = start;
  j["skipped"] = skipped;
  j["mixed"] = mixed;
  j["tmix"] = tmix;
  j["last_d"] = last_d;
  j["t_max"] = t_max;
  j["seed"] = std::to_string(seed);  // 64-bit: keep out of double territory
  j["rng"] = rng_id;
  j["wall_ms"] = wall_ms;
  j["version"] = kVersion;
  return j.dump();
}

SweepRecord SweepRecord::from_jsonl(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  SweepRecord r;
  r.schema = j.at("schema").get<int>();
  if (r.schema != kSchemaVersion)
    throw RunError("store schema version mismatch: got " +
                   std::to_string(r.schema) + ", expected " +
                   std::to_string(kSchemaVersion) + " (no silent migration)");
  r.kind = j.at("kind").get<std::string>();
  r.n = j.at("n").get<int64_t>();
  r.k = j.at("k").get<int>();
  r.x = j.at("x").get<int64_t>();
  r.y = j.at("y").get<int64_t>();
  r.instance = j.at("instance").get<std::string>();
  r.p = j.at("p").get<double>();
  r.q = j.at("q").get<double>();
  r.a = j.at("a").get<double>();
  r.eps = j.at("eps").get<double>();
  r.start = j.at("start").get<std::string>();
  r.skipped = j.at("skipped").get<bool>();
  r.mixed = j.at("mixed").get<bool>();
  r.tmix = j.at("tmix").get<int64_t>();
  r.last_d = j.at("last_d").get<double>();
  r.t_max = j.at("t_max").get<int64_t>();
  r.seed = std::stoull(j.at("seed").get<std::string>());
  r.rng_id = j.at("rng").get<std::string>();
  r.wall_ms = j.at("wall_ms").get<double>();
  return r;
}

bool SweepRecord::same_result(const SweepRecord& o) const {
  return schema == o.schema && kind == o.kind && n == o.n && k == o.k &&
         x == o.x && y == o.y && instance == o.instance && p == o.p &&
         q == o.q && a == o.a && eps == o.eps && start == o.start &&
         skipped == o.skipped && mixed == o.mixed && tmix == o.tmix &&
         last_d == o.last_d && t_max == o.t_max && seed == o.seed &&
         rng_id == o.rng_id;
}

StoreLoad load_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open store '" + path + "'");
  StoreLoad out;
  std::string line;
  int64_t offset = 0;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    int64_t line_bytes = static_cast<int64_t>(line.size()) + 1;
    if (line.empty()) {
      offset += line_bytes;
      continue;
    }
    try {
      SweepRecord r = SweepRecord::from_jsonl(line);
      out.keys.insert(r.key());
      out.records.push_back(std::move(r));
      offset += line_bytes;
      out.valid_bytes = offset;
    } catch (const RunError&) {
      throw;  // schema mismatch is never skippable
    } catch (const std::exception& e) {
      // only a torn final line is tolerated (interrupted append)
      if (in.peek() == EOF) {
        out.trailing_garbage = true;
        out.report = "store '" + path + "': discarded torn trailing line " +
                     std::to_string(lineno) + " (" + e.what() + ")";
        return out;
      }
      throw RunError("store '" + path + "': corrupt record at line " +
                     std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void export_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::vector<const SweepRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->x != b->x ? a->x < b->x : a->y < b->y;
  });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "x,y,tmix\n";
  for (const auto* r : sorted) {
    int64_t t = r->skipped ? -2 : (r->mixed ? r->tmix : -1);
    out << r->x << ',' << r->y << ',' << t << '\n';
  }
}

std::vector<SweepRecord> run_cells(
    int64_t count, const std::function<SweepRecord(int64_t)>& describe,
    const std::function<void(SweepRecord&)>& compute, const SweepOpts& opts) {
  namespace fs = std::filesystem;

  std::unordered_map<std::string, SweepRecord> done;
  if (!opts.store_path.empty()) {
    if (opts.resume && fs::exists(opts.store_path)) {
      StoreLoad ld = load_store(opts.store_path);
      if (ld.trailing_garbage) {
        std::fprintf(stderr, "%s\n", ld.report.c_str());
        fs::resize_file(opts.store_path, static_cast<uintmax_t>(ld.valid_bytes));
      }
      for (auto& r : ld.records) done.emplace(r.key(), std::move(r));
    } else {
      std::ofstream trunc(opts.store_path, std::ios::binary | std::ios::trunc);
      if (!trunc) throw ConfigError("cannot write store '" + opts.store_path + "'");
    }
  }

  std::vector<SweepRecord> recs(static_cast<size_t>(count));
  std::vector<int64_t> todo;
  for (int64_t i = 0; i < count; ++i) {
    recs[static_cast<size_t>(i)] = describe(i);
    auto it = done.find(recs[static_cast<size_t>(i)].key());
    if (it != done.end())
      recs[static_cast<size_t>(i)] = it->second;
    else
      todo.push_back(i);
  }
  int64_t limit = opts.max_cells >= 0
                      ? std::min<int64_t>(opts.max_cells,
                                          static_cast<int64_t>(todo.size()))
                      : static_cast<int64_t>(todo.size());
  std::vector<bool> dropped(static_cast<size_t>(count), false);
  for (size_t t = static_cast<size_t>(limit); t < todo.size(); ++t)
    dropped[static_cast<size_t>(todo[t])] = true;
  todo.resize(static_cast<size_t>(limit));

  std::atomic<int64_t> next{0};
  std::vector<uint8_t> ready(todo.size(), 0);
  std::mutex mu;
  std::condition_variable cv;

  auto worker = [&]() {
    for (;;) {
      int64_t t = next.fetch_add(1);
      if (t >= static_cast<int64_t>(todo.size())) return;
      auto& rec = recs[static_cast<size_t>(todo[static_cast<size_t>(t)])];
      auto t0 = std::chrono::steady_clock::now();
      compute(rec);
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      {
        std::lock_guard<std::mutex> lk(mu);
        ready[static_cast<size_t>(t)] = 1;
      }
      cv.notify_all();
    }
  };

  int nthreads = std::max(1, opts.threads);
  nthreads = static_cast<int>(
      std::min<int64_t>(nthreads, std::max<int64_t>(1, static_cast<int64_t>(todo.size()))));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nthreads));
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);

  // single appender, strict cell order: output is scheduling-independent
  std::ofstream app;
  if (!opts.store_path.empty()) {
    app.open(opts.store_path, std::ios::binary | std::ios::app);
    if (!app) throw ConfigError("cannot append to store '" + opts.store_path + "'");
  }
  for (size_t t = 0; t < todo.size(); ++t) {
    {
      std::unique_lock<std::mutex> lk(mu);
      cv.wait(lk, [&] { return ready[t] != 0; });
    }
    if (app.is_open()) {
      app << recs[static_cast<size_t>(todo[t])].to_jsonl() << '\n';
      app.flush();
    }
  }
  for (auto& th : pool) th.join();

  std::vector<SweepRecord> out;
  out.reserve(static_cast<size_t>(count));
  for (int64_t i = 0; i < count; ++i)
    if (!dropped[static_cast<size_t>(i)]) out.push_back(std::move(recs[static_cast<size_t>(i)]));
  return out;
}

namespace {

SweepRecord base_record(const std::string& kind, int64_t n, int k,
                        const WalkParams& w, const SweepOpts& opts) {
  SweepRecord r;
  r.kind = kind;
  r.n = n;
  r.k = k;
  r.p = w.p;
  r.q = w.q;
  r.a = w.a;
  r.eps = opts.eps;
  r.start = opts.start.str();
  r.t_max = opts.t_max >= 0 ? opts.t_max : default_t_max(n);
  r.rng_id = kRngId;
  return r;
}

void compute_cell(SweepRecord& rec, const WalkParams& w) {
  if (rec.skipped) return;
  PerturbedCycle g = from_spec(rec.instance);
  MixResult mr = mixing_time(g, w, rec.eps, StartSet::parse(rec.start), rec.t_max);
  rec.mixed = mr.mixed;
  rec.tmix = mr.mixed ? mr.t : -1;
  rec.last_d = mr.last_d;
}

}  // namespace

std::vector<SweepRecord> sweep_lengths(int64_t n, const WalkParams& w,
                                       uint64_t placement_seed,
                                       const SweepOpts& opts) {
  if (n < 8) throw ConfigError("sweep_lengths needs n >= 8");
  validate_params(w);
  const int k = 2;
  const int64_t half = n / 2;
  const int64_t step = std::max<int64_t>(1, opts.grid_step);
  std::vector<int64_t> lvals;
  for (int64_t l = 1; l <= half; l += step) lvals.push_back(l);
  const auto m = static_cast<int64_t>(lvals.size());
  const int64_t count = m * m;

  auto describe = [&, lvals](int64_t i) {
    SweepRecord rec = base_record("lengths", n, k, w, opts);
    rec.x = lvals[static_cast<size_t>(i / m)];
    rec.y = lvals[static_cast<size_t>(i % m)];
    rec.seed = derive_seed(placement_seed, static_cast<uint64_t>(i));
    Rng rng(rec.seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      auto u1 = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
      auto u2 = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
      try {
        PerturbedCycle g = from_pairs(
            n, {{u1, (u1 + rec.x) % n}, {u2, (u2 + rec.y) % n}});
        rec.instance = serialize(g);
        return rec;
      } catch (const ConfigError&) {
        // colliding hubs; redraw
      }
    }
    rec.skipped = true;
    return rec;
  };
  auto compute = [&](SweepRecord& rec) { compute_cell(rec, w); };
  return run_cells(count, describe, compute, opts);
}

std::vector<SweepRecord> sweep_positions(int64_t n,
                                         const std::vector<int64_t>& lengths,
                                         const WalkParams& w,
                                         const SweepOpts& opts) {
  validate_params(w);
  const int k = static_cast<int>(lengths.size());
  if (k < 1 || k > 3) throw ConfigError("sweep_positions supports k in {1,2,3}");
  for (int64_t l : lengths)
    if (l == 0 || 2 * l > n || 2 * l <= -n)
      throw ConfigError("lengths must be nonzero and in (-n/2, n/2]");

  const int64_t step = std::max<int64_t>(1, opts.grid_step);
  std::vector<int64_t> uvals;
  for (int64_t u = 0; u < n; u += step) uvals.push_back(u);
  const auto m = static_cast<int64_t>(uvals.size());
  const int64_t count = k == 1 ? 1 : (k == 2 ? m : m * m);

  auto describe = [&, uvals](int64_t i) {
    SweepRecord rec = base_record("positions", n, k, w, opts);
    std::vector<std::pair<int64_t, int64_t>> pairs{{0, ((lengths[0] % n) + n) % n}};
    if (k >= 2) {
      int64_t u2 = k == 2 ? uvals[static_cast<size_t>(i)]
                          : uvals[static_cast<size_t>(i / m)];
      rec.x = u2;
      pairs.emplace_back(u2, (u2 + lengths[1] % n + n) % n);
    }
    if (k == 3) {
      int64_t u3 = uvals[static_cast<size_t>(i % m)];
      rec.y = u3;
      pairs.emplace_back(u3, (u3 + lengths[2] % n + n) % n);
    }
    try {
      rec.instance = serialize(from_pairs(n, pairs));
    } catch (const ConfigError&) {
      rec.skipped = true;  // colliding hubs at this cell
    }
    return rec;
  };
  auto compute = [&](SweepRecord& rec) { compute_cell(rec, w); };
  return run_cells(count, describe, compute, opts);
}

double curve_quantile(const Curve& c, double q) {
  if (c.sorted_scaled.empty()) throw ConfigError("empty curve");
  if (q < 0) q = 0;
  if (q > 1) q = 1;
  double pos = q * static_cast<double>(c.sorted_scaled.size() - 1);
  auto i = static_cast<size_t>(pos);
  double frac = pos - static_cast<double>(i);
  if (i + 1 >= c.sorted_scaled.size()) return c.sorted_scaled.back();
  return c.sorted_scaled[i] * (1 - frac) + c.sorted_scaled[i + 1] * frac;
}

std::vector<Curve> sorted_scaled(const std::vector<int64_t>& ns, int k,
                                 const WalkParams& w, uint64_t placement_seed,
                                 const SweepOpts& opts) {
  if (k != 0 && k != 2)
    throw ConfigError("sorted_scaled supports k=2 (grid) and k=0 (control)");
  std::vector<Curve> out;
  for (int64_t n : ns) {
    Curve c;
    c.n = n;
    double scale = std::pow(static_cast<double>(n),
                            (static_cast<double>(k) + 2) / (static_cast<double>(k) + 1));
    if (k == 0) {
      MixResult mr = mixing_time(make_cycle(n), w, opts.eps, opts.start,
                                 opts.t_max >= 0 ? opts.t_max : default_t_max(n));
      if (mr.mixed) c.sorted_scaled.push_back(static_cast<double>(mr.t) / scale);
      c.stride = 1;
    } else {
      SweepOpts so = opts;
      so.store_path.clear();  // curves are derived; store only via sweep CLI
      so.resume = false;
      c.stride = std::max<int64_t>(1, so.grid_step);
      auto recs = sweep_lengths(n, w, derive_seed(placement_seed, static_cast<uint64_t>(n)), so);
      for (const auto& r : recs)
        if (!r.skipped && r.mixed)
          c.sorted_scaled.push_back(static_cast<double>(r.tmix) / scale);
      std::sort(c.sorted_scaled.begin(), c.sorted_scaled.end());
    }
    out.push_back(std::move(c));
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median of empty set");
  std::sort(v.begin(), v.end());
  size_t mid = v.size() / 2;
  if (v.size() % 2) return v[mid];
  return 0.5 * (v[mid - 1] + v[mid]);
}

FitSummary exponent_campaign(int k, const std::vector<int64_t>& ns,
                             int instances_per_n, const WalkParams& w,
                             uint64_t seed, const SweepOpts& opts) {
  if (ns.size() < 3) throw ConfigError("exponent campaign needs >= 3 sizes");
  if (instances_per_n < 5) throw ConfigError("exponent campaign needs >= 5 instances per n");
  validate_params(w);

  const auto per = static_cast<int64_t>(instances_per_n);
  const int64_t count = static_cast<int64_t>(ns.size()) * per;

  auto describe = [&](int64_t i) {
    int64_t n = ns[static_cast<size_t>(i / per)];
    SweepRecord rec = base_record("exponent", n, k, w, opts);
    rec.x = n;
    rec.y = i % per;
    rec.seed = derive_seed(seed, static_cast<uint64_t>(i));
    rec.instance = serialize(sample_instance(n, k, rec.seed));
    return rec;
  };
  auto compute = [&](SweepRecord& rec) { compute_cell(rec, w); };
  auto recs = run_cells(count, describe, compute, opts);

  FitSummary fs;
  fs.k = k;
  fs.ns = ns;
  int64_t not_mixed = 0;
  std::vector<std::pair<double, double>> pts;
  for (size_t ni = 0; ni < ns.size(); ++ni) {
    std::vector<double> vals;
    for (int64_t i = 0; i < per; ++i) {
      const auto& r = recs[ni * static_cast<size_t>(per) + static_cast<size_t>(i)];
      if (r.mixed)
        vals.push_back(static_cast<double>(r.tmix));
      else
        ++not_mixed;
    }
    if (vals.empty()) {
      fs.dominated = true;
      fs.medians.push_back(-1);
      continue;
    }
    fs.medians.push_back(median(vals));
    pts.emplace_back(static_cast<double>(ns[ni]), fs.medians.back());
  }
  fs.not_mixed_fraction =
      static_cast<double>(not_mixed) / static_cast<double>(count);
  if (!fs.dominated) fs.fit = exponent_fit(pts);
  return fs;
}

}  // namespace ringmix
