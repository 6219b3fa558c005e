#ifndef GRIFFIN_HARNESS_WORKLOAD_HPP_
#define GRIFFIN_HARNESS_WORKLOAD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "griffin.h"

namespace griffin::harness {

// Benchmark configuration. Every run loads a fresh store with the same
// seeded key population, drains pending synchronization, then measures a
// fixed-duration timed region.
struct WorkloadOptions {
  int engine = GRIFFIN_ENGINE_GRIFFIN;
  std::string workload = "ycsb-a";  // ycsb-a | ycsb-e | scan-only | insert-only
  int threads = 8;
  uint64_t records = 100000;   // keys loaded before the timed region
  uint32_t key_len = 5;        // random alphanumeric key length, bytes
  uint32_t value_len = 8;
  uint32_t scan_cap = 100;     // max results returned per scan
  double scan_max_frac = 0.25; // scan width: up to this fraction of the keys
  double pause_ms = 0.0;       // dwell between a scan and its commit
  double duration_s = 10.0;
  int runs = 3;
  uint64_t seed = 42;

  uint64_t capacity_slots = 0;  // 0 = size from records and workload
  uint64_t sync_interval_us = 1000;
  uint32_t coop_sync_ops = 0;
  int sync_autostart = 1;
  bool full_predicate_validation = false;
  bool profile_ops = false;
  bool pin_cpus = false;
};

// One timed region's outcome. `delta` holds engine counters accumulated in
// the region only (loading excluded). Attempted-operation counts come from
// the generators themselves, so mix ratios can be checked independently of
// which operations succeeded.
struct RunStats {
  double ops_per_s = 0.0;   // committed txns per second
  double abort_rate = 0.0;  // aborted / (committed + aborted)
  uint64_t committed = 0;
  uint64_t aborted = 0;
  uint64_t ops_lookup = 0;
  uint64_t ops_scan = 0;
  uint64_t ops_insert = 0;
  uint64_t observed_n = 0;     // table size after the region
  double mean_scan_len = 0.0;  // keys returned per successful scan
  double elapsed_s = 0.0;
  griffin_stats_t delta{};
};

struct BenchResult {
  // config echo
  std::string engine;
  std::string workload;
  int threads = 0;
  uint64_t records = 0;
  uint32_t key_len = 0;
  uint32_t scan_cap = 0;
  double scan_max_frac = 0.0;
  double pause_ms = 0.0;
  double duration_s = 0.0;
  uint64_t seed = 0;
  // outcomes
  std::vector<RunStats> runs;
  double committed_ops_per_s = 0.0;  // mean over runs
  double stddev_ops_per_s = 0.0;
  double abort_rate = 0.0;           // mean over runs
  double mean_scan_len = 0.0;
  double observed_n = 0.0;           // mean table size over runs
  std::string error;  // nonempty when the benchmark could not run

  bool ok() const { return error.empty(); }
};

BenchResult run_workload(const WorkloadOptions& opt);

// Engine counter deltas: end minus start for the monotone counters; the two
// instantaneous lock-list lengths carry the end value.
griffin_stats_t stats_diff(const griffin_stats_t& end,
                           const griffin_stats_t& start);

}  // namespace griffin::harness

#endif  // GRIFFIN_HARNESS_WORKLOAD_HPP_
