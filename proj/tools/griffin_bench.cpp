// Benchmark and verification driver for the griffin library. Everything
// here goes through the public C API, the same surface external consumers
// link against.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "griffin.h"
#include "griffin/harness/replay.hpp"
#include "griffin/harness/report.hpp"
#include "griffin/harness/scenarios.hpp"
#include "griffin/harness/stress.hpp"
#include "griffin/harness/workload.hpp"

namespace gh = griffin::harness;

namespace {

int run_bench(const gh::WorkloadOptions& opt, const std::string& format,
              const std::string& out_path) {
  gh::BenchResult res = gh::run_workload(opt);
  std::string text;
  if (format == "json") text = gh::bench_to_json(res);
  else if (format == "csv") text = gh::bench_to_csv(res);
  else text = gh::bench_to_text(res);

  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
      return 2;
    }
    f << text;
  }
  if (!res.ok()) {
    std::fprintf(stderr, "bench failed: %s\n", res.error.c_str());
    return 2;
  }
  return 0;
}

struct VerifyTally {
  int failed = 0;
  void report(const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) failed++;
  }
};

int run_verify(uint64_t replay_ops, double stress_s, uint64_t seed) {
  VerifyTally t;

  gh::ScenarioResult ph = gh::scenario_phantom();
  t.report("scenario_phantom", ph.passed, ph.detail);
  gh::ScenarioResult sr = gh::scenario_stale_read();
  t.report("scenario_stale_read", sr.passed, sr.detail);

  for (int engine : {GRIFFIN_ENGINE_GRIFFIN, GRIFFIN_ENGINE_BASELINE}) {
    gh::ReplayOptions ro;
    ro.engine = engine;
    ro.ops = replay_ops;
    ro.seed = seed;
    gh::ReplayResult rr = gh::replay_sequential(ro);
    bool ok = rr.divergences == 0 && rr.invariant_violations == 0;
    char name[64];
    std::snprintf(name, sizeof name, "replay_%s",
                  engine == GRIFFIN_ENGINE_BASELINE ? "baseline" : "griffin");
    t.report(name, ok, ok ? "" : rr.first_divergence);
  }

  for (int engine : {GRIFFIN_ENGINE_GRIFFIN, GRIFFIN_ENGINE_BASELINE}) {
    gh::StressOptions so;
    so.engine = engine;
    so.duration_s = stress_s;
    so.seed = seed;
    so.atomic_writes = engine == GRIFFIN_ENGINE_BASELINE;
    // Have workers share sweep duty: on machines with fewer cores than
    // workers, a background-only sweeper gets starved and throughput dies
    // with all sides stuck behind unswept entries.
    so.coop_sync_ops = 4;
    gh::StressResult res = gh::run_token_stress(so);
    bool ok = res.total_violations() == 0 && res.invariant_violations == 0 &&
              res.converged && res.moves_committed > 0 && res.observations > 0;
    char name[64];
    std::snprintf(name, sizeof name, "stress_%s",
                  engine == GRIFFIN_ENGINE_BASELINE ? "baseline" : "griffin");
    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "%" PRIu64 " moves, %" PRIu64 " observations, %" PRIu64
                  " violations%s%s",
                  res.moves_committed, res.observations,
                  res.total_violations(), res.detail.empty() ? "" : "; ",
                  res.detail.c_str());
    t.report(name, ok, detail);
  }

  std::printf("%s\n", t.failed ? "VERIFY FAILED" : "VERIFY OK");
  return t.failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"griffin hybrid index benchmark and verification tool"};
  app.require_subcommand(1);

  // ---- bench ----
  gh::WorkloadOptions opt;
  std::string engine_name = "griffin";
  std::string format = "text";
  std::string out_path;
  std::string rescan_mode = "truncated";

  CLI::App* bench = app.add_subcommand("bench", "run a timed workload");
  bench->add_option("--engine", engine_name, "engine to drive")
      ->check(CLI::IsMember({"griffin", "baseline"}))
      ->envname("GRIFFIN_ENGINE")
      ->capture_default_str();
  bench->add_option("--workload", opt.workload,
                    "ycsb-a | ycsb-e | scan-only | insert-only")
      ->check(CLI::IsMember({"ycsb-a", "ycsb-e", "scan-only", "insert-only"}))
      ->envname("GRIFFIN_WORKLOAD")
      ->capture_default_str();
  bench->add_option("--threads", opt.threads, "worker threads")
      ->check(CLI::Range(1, 1024))
      ->envname("GRIFFIN_THREADS")
      ->capture_default_str();
  bench->add_option("--records", opt.records, "keys loaded before timing")
      ->check(CLI::Range(uint64_t{1}, uint64_t{100000000}))
      ->envname("GRIFFIN_RECORDS")
      ->capture_default_str();
  bench->add_option("--key-len", opt.key_len,
                    "random alphanumeric key length in bytes")
      ->check(CLI::Range(1u, 64u))
      ->envname("GRIFFIN_KEY_LEN")
      ->capture_default_str();
  bench->add_option("--value-len", opt.value_len, "value bytes")
      ->check(CLI::Range(0u, 4096u))
      ->envname("GRIFFIN_VALUE_LEN")
      ->capture_default_str();
  bench->add_option("--scan-cap", opt.scan_cap, "max keys per scan")
      ->check(CLI::Range(1u, 1000000u))
      ->envname("GRIFFIN_SCAN_CAP")
      ->capture_default_str();
  bench->add_option("--scan-max-frac", opt.scan_max_frac,
                    "scan length cap as a fraction of records")
      ->check(CLI::Range(0.0, 1.0))
      ->envname("GRIFFIN_SCAN_MAX_FRAC")
      ->capture_default_str();
  bench->add_option("--pause-ms", opt.pause_ms,
                    "dwell between a txn's scans and its commit")
      ->check(CLI::Range(0.0, 10000.0))
      ->envname("GRIFFIN_PAUSE_MS")
      ->capture_default_str();
  bench->add_option("--duration-s", opt.duration_s, "timed region per run")
      ->check(CLI::Range(0.1, 3600.0))
      ->envname("GRIFFIN_DURATION_S")
      ->capture_default_str();
  bench->add_option("--runs", opt.runs, "independent runs to aggregate")
      ->check(CLI::Range(1, 100))
      ->envname("GRIFFIN_RUNS")
      ->capture_default_str();
  bench->add_option("--seed", opt.seed, "workload rng seed")
      ->envname("GRIFFIN_SEED")
      ->capture_default_str();
  bench->add_option("--capacity", opt.capacity_slots,
                    "hash slots, rounded up to a power of two (0 = auto)")
      ->envname("GRIFFIN_CAPACITY")
      ->capture_default_str();
  bench->add_option("--sync-interval-us", opt.sync_interval_us,
                    "background synchronization period")
      ->envname("GRIFFIN_SYNC_INTERVAL_US")
      ->capture_default_str();
  bench->add_option("--sync-coop-ops", opt.coop_sync_ops,
                    "0 = off; else every Nth finished txn sweeps")
      ->envname("GRIFFIN_SYNC_COOP_OPS")
      ->capture_default_str();
  bench->add_option("--rescan-validation", rescan_mode,
                    "baseline commit validation: truncated | full")
      ->check(CLI::IsMember({"truncated", "full"}))
      ->envname("GRIFFIN_RESCAN_VALIDATION")
      ->capture_default_str();
  bench->add_flag("--pin-cpus", opt.pin_cpus, "pin workers round-robin")
      ->envname("GRIFFIN_PIN_CPUS");
  bench->add_flag("--profile-ops", opt.profile_ops,
                  "collect per-stage op timings")
      ->envname("GRIFFIN_PROFILE_OPS");
  bench->add_option("--format", format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->envname("GRIFFIN_FORMAT")
      ->capture_default_str();
  bench->add_option("--output,--out", out_path,
                    "write the report here, not stdout")
      ->envname("GRIFFIN_OUTPUT");

  // ---- verify ----
  uint64_t replay_ops = 20000;
  double stress_s = 3.0;
  uint64_t vseed = 42;
  CLI::App* verify =
      app.add_subcommand("verify", "run the correctness oracle suite");
  verify->add_option("--replay-ops", replay_ops, "sequential replay length")
      ->capture_default_str();
  verify->add_option("--stress-s", stress_s, "seconds per stress engine")
      ->check(CLI::Range(0.1, 600.0))
      ->capture_default_str();
  verify->add_option("--seed", vseed, "oracle rng seed")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (bench->parsed()) {
    opt.engine = engine_name == "baseline" ? GRIFFIN_ENGINE_BASELINE
                                           : GRIFFIN_ENGINE_GRIFFIN;
    opt.full_predicate_validation = rescan_mode == "full";
    return run_bench(opt, format, out_path);
  }
  return run_verify(replay_ops, stress_s, vseed);
}
