#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ringmix/mixing.hpp"

namespace ringmix {

// One computed sweep cell. (kind, n, k, coords, instance, params, eps, start)
// identifies a cell; everything else is its result plus provenance.
struct SweepRecord {
  int schema = kSchemaVersion;
  std::string kind;      // lengths | positions | exponent
  int64_t n = 0;
  int k = 0;
  int64_t x = 0, y = 0;  // grid coordinates (meaning depends on kind)
  std::string instance;  // canonical instance line ("" when skipped)
  double p = 0, q = 0, a = 0, eps = 0;
  std::string start;
  bool skipped = false;
  bool mixed = false;
  int64_t tmix = -1;
  double last_d = 1.0;
  int64_t t_max = 0;
  uint64_t seed = 0;       // placement/instance seed for this cell
  std::string rng_id;
  double wall_ms = 0;      // informational; excluded from equality/exports

  std::string key() const;
  std::string to_jsonl() const;                  // one line, fixed field order
  static SweepRecord from_jsonl(const std::string& line);
  bool same_result(const SweepRecord& o) const;  // equality modulo wall_ms
};

struct StoreLoad {
  std::vector<SweepRecord> records;
  std::set<std::string> keys;
  bool trailing_garbage = false;  // detected+reported, last valid record kept
  int64_t valid_bytes = 0;
  std::string report;
};

// Append-only JSONL store, one record per line, flushed per record.
StoreLoad load_store(const std::string& path);

// canonical heatmap export: header x,y,tmix; rows sorted by (x,y);
// tmix = -1 when not mixed, -2 when the cell was skipped
void export_csv(const std::vector<SweepRecord>& records, const std::string& path);

struct SweepOpts {
  double eps = 0.25;
  StartSet start = StartSet::single(0);
  int64_t t_max = -1;      // default 50 n^2
  int64_t grid_step = 1;
  int threads = 1;
  std::string store_path;  // empty: keep records in memory only
  bool resume = false;
  int64_t max_cells = -1;  // stop after this many computed cells (tests)
};

// t_mix over the (l1,l2) grid in [1, n/2]^2 for k=2; one seeded random
// placement per cell
std::vector<SweepRecord> sweep_lengths(int64_t n, const WalkParams& w,
                                       uint64_t placement_seed,
                                       const SweepOpts& opts);

// fixed signed lengths; first edge anchored at 0; grid over the remaining
// left endpoints (k=2: 1D, k=3: 2D). Cells with colliding hubs are skipped.
std::vector<SweepRecord> sweep_positions(int64_t n,
                                         const std::vector<int64_t>& lengths,
                                         const WalkParams& w,
                                         const SweepOpts& opts);

struct Curve {
  int64_t n = 0;
  int64_t stride = 1;                // grid subsampling stride used
  std::vector<double> sorted_scaled; // t_mix / n^((k+2)/(k+1)), ascending
};

// per-n sorted scaled curves over the k=2 length grid
std::vector<Curve> sorted_scaled(const std::vector<int64_t>& ns, int k,
                                 const WalkParams& w, uint64_t placement_seed,
                                 const SweepOpts& opts);

// value of the sorted curve at quantile q in [0,1], linear interpolation
double curve_quantile(const Curve& c, double q);

struct FitSummary {
  int k = 0;
  std::vector<int64_t> ns;
  std::vector<double> medians;   // median t_mix per n over mixed cells
  ExpFit fit;
  double not_mixed_fraction = 0;
  bool dominated = false;        // some n had no mixed instance at all
};

// medians over sampled instances per n, then a log-log slope fit
FitSummary exponent_campaign(int k, const std::vector<int64_t>& ns,
                             int instances_per_n, const WalkParams& w,
                             uint64_t seed, const SweepOpts& opts);

// deterministic pool: describe(i) builds the cell identity cheaply (resume
// skips cells whose key is already in the store), compute fills the result;
// cells are computed by any worker but appended to the store (and returned)
// in cell order, so outputs never depend on scheduling
std::vector<SweepRecord> run_cells(
    int64_t count, const std::function<SweepRecord(int64_t)>& describe,
    const std::function<void(SweepRecord&)>& compute, const SweepOpts& opts);

double median(std::vector<double> v);

}  // namespace ringmix
