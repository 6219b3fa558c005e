#include "griffin/harness/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace griffin::harness {

namespace {

using nlohmann::json;

json counters_to_json(const griffin_stats_t& s) {
  json j;
#define GRIFFIN_FIELD(f) j[#f] = s.f
  GRIFFIN_FIELD(txns_begun);
  GRIFFIN_FIELD(txns_committed);
  GRIFFIN_FIELD(txns_aborted);
  GRIFFIN_FIELD(aborts_phantom);
  GRIFFIN_FIELD(aborts_stale_read);
  GRIFFIN_FIELD(aborts_key_exists);
  GRIFFIN_FIELD(aborts_key_not_found);
  GRIFFIN_FIELD(lookups);
  GRIFFIN_FIELD(lookup_hits);
  GRIFFIN_FIELD(inserts_ok);
  GRIFFIN_FIELD(deletes_ok);
  GRIFFIN_FIELD(scans_ok);
  GRIFFIN_FIELD(scan_keys_returned);
  GRIFFIN_FIELD(update_lock_appends);
  GRIFFIN_FIELD(scan_lock_appends);
  GRIFFIN_FIELD(update_lock_checks);
  GRIFFIN_FIELD(scan_lock_checks);
  GRIFFIN_FIELD(update_lock_nodes_visited);
  GRIFFIN_FIELD(scan_lock_nodes_visited);
  GRIFFIN_FIELD(tree_reads);
  GRIFFIN_FIELD(sync_passes);
  GRIFFIN_FIELD(sync_applied);
  GRIFFIN_FIELD(sync_rolled_back);
  GRIFFIN_FIELD(sync_scan_locks_collected);
  GRIFFIN_FIELD(rescans);
  GRIFFIN_FIELD(invariant_violations);
  GRIFFIN_FIELD(update_locks_len);
  GRIFFIN_FIELD(scan_locks_len);
  GRIFFIN_FIELD(ns_update_log);
  GRIFFIN_FIELD(ns_point_store);
  GRIFFIN_FIELD(ns_scan_lock_check);
#undef GRIFFIN_FIELD
  return j;
}

void counters_from_json(const json& j, griffin_stats_t* s) {
#define GRIFFIN_FIELD(f) s->f = j.value(#f, decltype(s->f){})
  GRIFFIN_FIELD(txns_begun);
  GRIFFIN_FIELD(txns_committed);
  GRIFFIN_FIELD(txns_aborted);
  GRIFFIN_FIELD(aborts_phantom);
  GRIFFIN_FIELD(aborts_stale_read);
  GRIFFIN_FIELD(aborts_key_exists);
  GRIFFIN_FIELD(aborts_key_not_found);
  GRIFFIN_FIELD(lookups);
  GRIFFIN_FIELD(lookup_hits);
  GRIFFIN_FIELD(inserts_ok);
  GRIFFIN_FIELD(deletes_ok);
  GRIFFIN_FIELD(scans_ok);
  GRIFFIN_FIELD(scan_keys_returned);
  GRIFFIN_FIELD(update_lock_appends);
  GRIFFIN_FIELD(scan_lock_appends);
  GRIFFIN_FIELD(update_lock_checks);
  GRIFFIN_FIELD(scan_lock_checks);
  GRIFFIN_FIELD(update_lock_nodes_visited);
  GRIFFIN_FIELD(scan_lock_nodes_visited);
  GRIFFIN_FIELD(tree_reads);
  GRIFFIN_FIELD(sync_passes);
  GRIFFIN_FIELD(sync_applied);
  GRIFFIN_FIELD(sync_rolled_back);
  GRIFFIN_FIELD(sync_scan_locks_collected);
  GRIFFIN_FIELD(rescans);
  GRIFFIN_FIELD(invariant_violations);
  GRIFFIN_FIELD(update_locks_len);
  GRIFFIN_FIELD(scan_locks_len);
  GRIFFIN_FIELD(ns_update_log);
  GRIFFIN_FIELD(ns_point_store);
  GRIFFIN_FIELD(ns_scan_lock_check);
#undef GRIFFIN_FIELD
}

json run_to_json(const RunStats& run) {
  json jr;
  jr["ops_per_s"] = run.ops_per_s;
  jr["abort_rate"] = run.abort_rate;
  jr["committed"] = run.committed;
  jr["aborted"] = run.aborted;
  jr["ops_lookup"] = run.ops_lookup;
  jr["ops_scan"] = run.ops_scan;
  jr["ops_insert"] = run.ops_insert;
  jr["observed_n"] = run.observed_n;
  jr["mean_scan_len"] = run.mean_scan_len;
  jr["elapsed_s"] = run.elapsed_s;
  jr["counters"] = counters_to_json(run.delta);
  return jr;
}

void run_from_json(const json& jr, RunStats* run) {
  run->ops_per_s = jr.value("ops_per_s", 0.0);
  run->abort_rate = jr.value("abort_rate", 0.0);
  run->committed = jr.value("committed", uint64_t{0});
  run->aborted = jr.value("aborted", uint64_t{0});
  run->ops_lookup = jr.value("ops_lookup", uint64_t{0});
  run->ops_scan = jr.value("ops_scan", uint64_t{0});
  run->ops_insert = jr.value("ops_insert", uint64_t{0});
  run->observed_n = jr.value("observed_n", uint64_t{0});
  run->mean_scan_len = jr.value("mean_scan_len", 0.0);
  run->elapsed_s = jr.value("elapsed_s", 0.0);
  if (jr.contains("counters")) counters_from_json(jr["counters"], &run->delta);
}

}  // namespace

std::string bench_to_json(const BenchResult& r) {
  json j;
  j["engine"] = r.engine;
  j["workload"] = r.workload;
  j["threads"] = r.threads;
  j["committed_ops_per_s"] = r.committed_ops_per_s;
  j["abort_rate"] = r.abort_rate;
  j["runs"] = r.runs.size();
  j["stddev"] = r.stddev_ops_per_s;
  j["observed_n"] = r.observed_n;
  j["mean_scan_len"] = r.mean_scan_len;
  j["records"] = r.records;
  j["key_len"] = r.key_len;
  j["scan_cap"] = r.scan_cap;
  j["scan_max_frac"] = r.scan_max_frac;
  j["pause_ms"] = r.pause_ms;
  j["duration_s"] = r.duration_s;
  j["seed"] = r.seed;
  if (!r.error.empty()) j["error"] = r.error;
  j["run_details"] = json::array();
  for (const RunStats& run : r.runs)
    j["run_details"].push_back(run_to_json(run));
  return j.dump(2) + "\n";
}

std::string bench_to_csv(const BenchResult& r) {
  std::string out =
      "engine,workload,threads,committed_ops_per_s,abort_rate,runs,stddev,"
      "observed_n,mean_scan_len,records,key_len,scan_cap,scan_max_frac,"
      "pause_ms,duration_s,seed,run,run_ops_per_s,run_abort_rate,"
      "run_committed,run_aborted\n";
  char line[640];
  for (size_t i = 0; i < r.runs.size(); i++) {
    const RunStats& run = r.runs[i];
    std::snprintf(line, sizeof line,
                  "%s,%s,%d,%.1f,%.6f,%zu,%.1f,%.0f,%.2f,%llu,%u,%u,%g,%g,%g,"
                  "%llu,%zu,%.1f,%.6f,%llu,%llu\n",
                  r.engine.c_str(), r.workload.c_str(), r.threads,
                  r.committed_ops_per_s, r.abort_rate, r.runs.size(),
                  r.stddev_ops_per_s, r.observed_n, r.mean_scan_len,
                  (unsigned long long)r.records, r.key_len, r.scan_cap,
                  r.scan_max_frac, r.pause_ms, r.duration_s,
                  (unsigned long long)r.seed, i, run.ops_per_s,
                  run.abort_rate, (unsigned long long)run.committed,
                  (unsigned long long)run.aborted);
    out += line;
  }
  return out;
}

std::string bench_to_text(const BenchResult& r) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "%s / %s: %d threads, %llu records, %.1fs x %zu runs\n",
                r.engine.c_str(), r.workload.c_str(), r.threads,
                (unsigned long long)r.records, r.duration_s, r.runs.size());
  out += buf;
  if (!r.error.empty()) {
    out += "  error: " + r.error + "\n";
    return out;
  }
  for (size_t i = 0; i < r.runs.size(); i++) {
    const RunStats& run = r.runs[i];
    std::snprintf(buf, sizeof buf,
                  "  run %zu: %.0f ops/s, abort rate %.4f, mean scan %.1f\n",
                  i, run.ops_per_s, run.abort_rate, run.mean_scan_len);
    out += buf;
  }
  std::snprintf(
      buf, sizeof buf,
      "  mean %.0f ops/s (stddev %.0f), abort rate %.4f, N %.0f, M %.1f\n",
      r.committed_ops_per_s, r.stddev_ops_per_s, r.abort_rate, r.observed_n,
      r.mean_scan_len);
  out += buf;
  return out;
}

bool bench_from_json(const std::string& text, BenchResult* out) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("engine") ||
      !j.contains("run_details") || !j["run_details"].is_array())
    return false;
  BenchResult r;
  r.engine = j.value("engine", "");
  r.workload = j.value("workload", "");
  r.threads = j.value("threads", 0);
  r.committed_ops_per_s = j.value("committed_ops_per_s", 0.0);
  r.abort_rate = j.value("abort_rate", 0.0);
  r.stddev_ops_per_s = j.value("stddev", 0.0);
  r.observed_n = j.value("observed_n", 0.0);
  r.mean_scan_len = j.value("mean_scan_len", 0.0);
  r.records = j.value("records", uint64_t{0});
  r.key_len = j.value("key_len", uint32_t{0});
  r.scan_cap = j.value("scan_cap", uint32_t{0});
  r.scan_max_frac = j.value("scan_max_frac", 0.0);
  r.pause_ms = j.value("pause_ms", 0.0);
  r.duration_s = j.value("duration_s", 0.0);
  r.seed = j.value("seed", uint64_t{0});
  r.error = j.value("error", "");
  for (const json& jr : j["run_details"]) {
    RunStats run;
    run_from_json(jr, &run);
    r.runs.push_back(run);
  }
  *out = std::move(r);
  return true;
}

}  // namespace griffin::harness
