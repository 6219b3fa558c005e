#include "griffin/harness/workload.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <thread>
#include <unordered_set>

#ifdef __linux__
#include <pthread.h>
#include <sched.h>
#endif

#include "griffin/harness/capi_util.hpp"

namespace griffin::harness {

namespace {

constexpr int kScanPctE = 95;  // ycsb-e: rest are fresh-key inserts

constexpr char kAlphabet[] =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr uint64_t kAlphabetLen = 62;

std::string random_key(Rng& rng, uint32_t len) {
  std::string k(len, '0');
  for (uint32_t i = 0; i < len; i++) k[i] = kAlphabet[rng.below(kAlphabetLen)];
  return k;
}

std::string make_value(Rng& rng, uint32_t len) {
  return random_key(rng, len);
}

// The loaded key population: `records` distinct seeded random draws
// (duplicates re-drawn), plus a sorted copy that defines key-order space for
// scan ranges. Identical for every run of the same seed.
struct KeySpace {
  std::vector<std::string> keys;    // load order
  std::vector<std::string> sorted;  // key order

  KeySpace(uint64_t records, uint32_t key_len, uint64_t seed) {
    Rng rng(substream(seed, 0));
    std::unordered_set<std::string> seen;
    seen.reserve(size_t(records) * 2);
    keys.reserve(size_t(records));
    while (keys.size() < records) {
      std::string k = random_key(rng, key_len);
      if (seen.insert(k).second) keys.push_back(std::move(k));
    }
    sorted = keys;
    std::sort(sorted.begin(), sorted.end());
  }
};

int count_cb(void*, const char*, size_t, const char*, size_t) { return 0; }

enum class Mix { YcsbA, YcsbE, ScanOnly, InsertOnly };

struct Shared {
  const WorkloadOptions* opt;
  griffin_db_t* db;
  const KeySpace* ks;
  Mix mix;
  uint64_t scan_span;  // scan width upper bound in key-order positions
  bool oversubscribed = false;
  std::atomic<bool> go{false};
  std::atomic<bool> stop{false};
  std::atomic<uint64_t> ops_lookup{0};
  std::atomic<uint64_t> ops_scan{0};
  std::atomic<uint64_t> ops_insert{0};
};

void pin_thread(int tid) {
#ifdef __linux__
  unsigned ncpu = std::max(1u, std::thread::hardware_concurrency());
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(unsigned(tid) % ncpu, &set);
  pthread_setaffinity_np(pthread_self(), sizeof set, &set);
#else
  (void)tid;
#endif
}

void worker_main(Shared* sh, int tid) {
  if (sh->opt->pin_cpus) pin_thread(tid);
  // One deterministic stream per (seed, thread id); stream 0 is the loader.
  Rng rng(substream(sh->opt->seed, uint64_t(tid) + 1));
  const KeySpace& ks = *sh->ks;
  const uint64_t n = ks.sorted.size();
  const uint32_t vlen = sh->opt->value_len;
  const uint32_t klen = sh->opt->key_len;
  const uint32_t scan_cap = sh->opt->scan_cap;
  const double pause_ms = sh->opt->pause_ms;
  uint64_t n_lookup = 0, n_scan = 0, n_insert = 0;

  while (!sh->go.load(std::memory_order_acquire)) std::this_thread::yield();

  std::string k, v, looked;
  while (!sh->stop.load(std::memory_order_relaxed)) {
    bool do_scan = false, do_insert = false;
    switch (sh->mix) {
      case Mix::YcsbA: break;  // 100% lookups
      case Mix::YcsbE:
        do_scan = int(rng.below(100)) < kScanPctE;
        do_insert = !do_scan;
        break;
      case Mix::ScanOnly: do_scan = true; break;
      case Mix::InsertOnly: do_insert = true; break;
    }

    griffin_txn_t* t = nullptr;
    if (griffin_txn_begin(sh->db, &t) != GRIFFIN_OK) continue;
    int rc;
    if (do_scan) {
      // Start uniform over the population; width uniform in key-order space
      // up to the configured fraction; the result size capped separately.
      uint64_t i = rng.below(n);
      uint64_t w = 1 + rng.below(sh->scan_span);
      uint64_t j = std::min(i + w, n - 1);
      const std::string& b = ks.sorted[i];
      const std::string& e = ks.sorted[j];
      n_scan++;
      rc = griffin_scan(t, b.data(), b.size(), e.data(), e.size(), scan_cap,
                        count_cb, nullptr);
      if (rc == GRIFFIN_OK && pause_ms > 0)
        std::this_thread::sleep_for(
            std::chrono::duration<double, std::milli>(pause_ms));
    } else if (do_insert) {
      // Fresh uniform draw from the whole key alphabet; colliding with an
      // existing key is a legitimate abort and is counted as one.
      k = random_key(rng, klen);
      v = make_value(rng, vlen);
      n_insert++;
      rc = insert_str(t, k, v);
    } else {
      k = ks.keys[rng.below(n)];
      bool found;
      n_lookup++;
      rc = lookup_str(t, k, &looked, &found);
      if (rc == GRIFFIN_NOT_FOUND) rc = GRIFFIN_OK;  // miss is not an abort
    }
    if (rc == GRIFFIN_OK) griffin_commit(t);
    griffin_txn_destroy(t);
    // With more workers than cores a spinning worker would monopolize its
    // core for a full scheduler slice and starve the others mid-transaction;
    // rotating after every transaction keeps the interleaving fine-grained.
    // Applied to both engines alike.
    if (sh->oversubscribed) std::this_thread::yield();
  }

  sh->ops_lookup.fetch_add(n_lookup, std::memory_order_relaxed);
  sh->ops_scan.fetch_add(n_scan, std::memory_order_relaxed);
  sh->ops_insert.fetch_add(n_insert, std::memory_order_relaxed);
}

bool load_phase(Shared* sh, std::string* err) {
  // Each key goes in as its own committed single-op transaction.
  for (const std::string& k : sh->ks->keys) {
    griffin_txn_t* t = nullptr;
    if (griffin_txn_begin(sh->db, &t) != GRIFFIN_OK) {
      *err = "load: txn_begin failed";
      return false;
    }
    int rc = insert_str(t, k, std::string(sh->opt->value_len, 'i'));
    if (rc == GRIFFIN_OK) rc = griffin_commit(t);
    griffin_txn_destroy(t);
    if (rc != GRIFFIN_OK) {
      *err = std::string("load: ") + griffin_strerror(rc);
      return false;
    }
  }
  // Drain pending synchronization so the timed region starts current.
  for (int i = 0; i < 1000; i++) {
    griffin_sync_pass(sh->db);
    griffin_stats_t st;
    griffin_stats(sh->db, &st);
    if (st.update_locks_len == 0 && st.scan_locks_len == 0) return true;
  }
  *err = "load: lock lists failed to drain";
  return false;
}

}  // namespace

griffin_stats_t stats_diff(const griffin_stats_t& end,
                           const griffin_stats_t& start) {
  griffin_stats_t d;
#define GRIFFIN_DIFF(f) d.f = end.f - start.f
  GRIFFIN_DIFF(txns_begun);
  GRIFFIN_DIFF(txns_committed);
  GRIFFIN_DIFF(txns_aborted);
  GRIFFIN_DIFF(aborts_phantom);
  GRIFFIN_DIFF(aborts_stale_read);
  GRIFFIN_DIFF(aborts_key_exists);
  GRIFFIN_DIFF(aborts_key_not_found);
  GRIFFIN_DIFF(lookups);
  GRIFFIN_DIFF(lookup_hits);
  GRIFFIN_DIFF(inserts_ok);
  GRIFFIN_DIFF(deletes_ok);
  GRIFFIN_DIFF(scans_ok);
  GRIFFIN_DIFF(scan_keys_returned);
  GRIFFIN_DIFF(update_lock_appends);
  GRIFFIN_DIFF(scan_lock_appends);
  GRIFFIN_DIFF(update_lock_checks);
  GRIFFIN_DIFF(scan_lock_checks);
  GRIFFIN_DIFF(update_lock_nodes_visited);
  GRIFFIN_DIFF(scan_lock_nodes_visited);
  GRIFFIN_DIFF(tree_reads);
  GRIFFIN_DIFF(sync_passes);
  GRIFFIN_DIFF(sync_applied);
  GRIFFIN_DIFF(sync_rolled_back);
  GRIFFIN_DIFF(sync_scan_locks_collected);
  GRIFFIN_DIFF(rescans);
  GRIFFIN_DIFF(invariant_violations);
  GRIFFIN_DIFF(ns_update_log);
  GRIFFIN_DIFF(ns_point_store);
  GRIFFIN_DIFF(ns_scan_lock_check);
#undef GRIFFIN_DIFF
  d.update_locks_len = end.update_locks_len;
  d.scan_locks_len = end.scan_locks_len;
  return d;
}

BenchResult run_workload(const WorkloadOptions& opt) {
  BenchResult res;
  res.engine =
      opt.engine == GRIFFIN_ENGINE_BASELINE ? "baseline" : "griffin";
  res.workload = opt.workload;
  res.threads = opt.threads;
  res.records = opt.records;
  res.key_len = opt.key_len;
  res.scan_cap = opt.scan_cap;
  res.scan_max_frac = opt.scan_max_frac;
  res.duration_s = opt.duration_s;
  res.pause_ms = opt.pause_ms;
  res.seed = opt.seed;

  Mix mix;
  if (opt.workload == "ycsb-a") mix = Mix::YcsbA;
  else if (opt.workload == "ycsb-e") mix = Mix::YcsbE;
  else if (opt.workload == "scan-only") mix = Mix::ScanOnly;
  else if (opt.workload == "insert-only") mix = Mix::InsertOnly;
  else {
    res.error = "unknown workload: " + opt.workload;
    return res;
  }
  if (opt.threads < 1 || opt.records < 1 || opt.runs < 1) {
    res.error = "threads, records and runs must be positive";
    return res;
  }
  if (opt.key_len < 1 || opt.scan_max_frac <= 0 || opt.scan_max_frac > 1) {
    res.error = "key_len must be positive and scan_max_frac in (0, 1]";
    return res;
  }
  {
    // The population must be a vanishing fraction of the draw space, or the
    // duplicate re-draw loop of the loader would grind.
    double space = std::pow(double(kAlphabetLen), double(opt.key_len));
    if (double(opt.records) > space / 4) {
      res.error = "records too large for key_len";
      return res;
    }
  }

  KeySpace ks(opt.records, opt.key_len, opt.seed);
  uint64_t scan_span = std::max<uint64_t>(
      1, uint64_t(double(opt.records) * opt.scan_max_frac));

  // Auto-size the hash table for the population rather than benchmarking a
  // mostly-empty multi-megabyte array. Insert mixes grow the table for the
  // whole run, so they get generous headroom; an explicit --capacity wins.
  uint64_t capacity = opt.capacity_slots;
  if (capacity == 0) {
    capacity = std::max<uint64_t>(1ull << 16, opt.records * 6);
    if (mix == Mix::InsertOnly)
      capacity = std::max<uint64_t>(capacity, 1ull << 23);
  }

  for (int run = 0; run < opt.runs; run++) {
    griffin_config_t cfg;
    griffin_config_init(&cfg);
    cfg.engine = opt.engine;
    cfg.capacity_slots = capacity;
    cfg.sync_interval_us = opt.sync_interval_us;
    cfg.sync_autostart = opt.sync_autostart;
    cfg.coop_sync_ops = opt.coop_sync_ops;
    cfg.full_predicate_validation = opt.full_predicate_validation ? 1 : 0;
    cfg.profile_ops = opt.profile_ops ? 1 : 0;
    griffin_db_t* db = nullptr;
    int orc = griffin_open(&cfg, &db);
    if (orc != GRIFFIN_OK) {
      res.error = std::string("open: ") + griffin_strerror(orc);
      return res;
    }

    Shared sh;
    sh.opt = &opt;
    sh.db = db;
    sh.ks = &ks;
    sh.mix = mix;
    sh.scan_span = scan_span;
    sh.oversubscribed =
        unsigned(opt.threads) >= std::thread::hardware_concurrency();

    if (!load_phase(&sh, &res.error)) {
      griffin_close(db);
      return res;
    }

    std::vector<std::thread> workers;
    workers.reserve(size_t(opt.threads));
    for (int tid = 0; tid < opt.threads; tid++)
      workers.emplace_back(worker_main, &sh, tid);

    griffin_stats_t s0;
    griffin_stats(db, &s0);
    auto t0 = std::chrono::steady_clock::now();
    sh.go.store(true, std::memory_order_release);
    std::this_thread::sleep_for(
        std::chrono::duration<double>(opt.duration_s));
    sh.stop.store(true, std::memory_order_relaxed);
    for (auto& w : workers) w.join();
    auto t1 = std::chrono::steady_clock::now();
    griffin_stats_t s1;
    griffin_stats(db, &s1);
    griffin_close(db);

    RunStats rs;
    rs.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
    rs.delta = stats_diff(s1, s0);
    rs.committed = rs.delta.txns_committed;
    rs.aborted = rs.delta.txns_aborted;
    rs.ops_per_s = rs.elapsed_s > 0 ? double(rs.committed) / rs.elapsed_s : 0;
    uint64_t finished = rs.committed + rs.aborted;
    rs.abort_rate = finished ? double(rs.aborted) / double(finished) : 0;
    rs.ops_lookup = sh.ops_lookup.load();
    rs.ops_scan = sh.ops_scan.load();
    rs.ops_insert = sh.ops_insert.load();
    rs.observed_n =
        opt.records + rs.delta.inserts_ok - rs.delta.deletes_ok;
    rs.mean_scan_len =
        rs.delta.scans_ok
            ? double(rs.delta.scan_keys_returned) / double(rs.delta.scans_ok)
            : 0;
    res.runs.push_back(rs);
  }

  double n = double(res.runs.size());
  for (const RunStats& r : res.runs) {
    res.committed_ops_per_s += r.ops_per_s;
    res.abort_rate += r.abort_rate;
    res.mean_scan_len += r.mean_scan_len;
    res.observed_n += double(r.observed_n);
  }
  res.committed_ops_per_s /= n;
  res.abort_rate /= n;
  res.mean_scan_len /= n;
  res.observed_n /= n;
  if (res.runs.size() > 1) {
    double ss = 0;
    for (const RunStats& r : res.runs) {
      double d = r.ops_per_s - res.committed_ops_per_s;
      ss += d * d;
    }
    res.stddev_ops_per_s = std::sqrt(ss / (n - 1));
  }
  return res;
}

}  // namespace griffin::harness
