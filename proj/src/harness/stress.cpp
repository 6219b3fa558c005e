#include "griffin/harness/stress.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "griffin/harness/capi_util.hpp"

namespace griffin::harness {

namespace {

struct Event {
  uint64_t begin_stamp;
  uint64_t commit_stamp;
  int to_region;
};

struct Token {
  std::atomic<bool> claimed{false};
  std::atomic<int> region{0};
  std::mutex mu;
  std::vector<Event> hist;
};

std::string key_of(int region, uint32_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c!%04u", region == 0 ? 'A' : 'B', i);
  return buf;
}

struct Shared {
  const StressOptions* opt;
  griffin_db_t* db;
  std::vector<std::unique_ptr<Token>> toks;
  std::atomic<uint64_t> stamp{1};
  std::atomic<bool> stop{false};
  uint32_t txn_flags = 0;

  // result accumulators
  std::atomic<uint64_t> moves{0}, observations{0};
  std::atomic<uint64_t> mover_aborts{0}, observer_aborts{0};
  std::atomic<uint64_t> conservation{0}, repeatability{0}, prediction{0};
  std::atomic<uint64_t> prediction_checks{0};
  std::mutex detail_mu;
  std::string detail;

  void note(const char* what, uint32_t tok) {
    std::lock_guard<std::mutex> g(detail_mu);
    if (!detail.empty()) return;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s (token %u)", what, tok);
    detail = buf;
  }
};

void mover_main(Shared* sh, uint64_t seed) {
  Rng rng(seed);
  const uint32_t n = sh->opt->tokens;
  while (!sh->stop.load(std::memory_order_relaxed)) {
    uint32_t i = uint32_t(rng.below(n));
    Token& tok = *sh->toks[i];
    bool free_ = false;
    if (!tok.claimed.compare_exchange_strong(free_, true,
                                             std::memory_order_acquire))
      continue;
    int from = tok.region.load(std::memory_order_relaxed);
    int to = 1 - from;
    uint64_t b = sh->stamp.fetch_add(1, std::memory_order_relaxed);

    griffin_txn_t* t = nullptr;
    if (griffin_txn_begin_flags(sh->db, sh->txn_flags, &t) != GRIFFIN_OK) {
      tok.claimed.store(false, std::memory_order_release);
      continue;
    }
    int rc = delete_str(t, key_of(from, i));
    if (rc == GRIFFIN_OK) rc = insert_str(t, key_of(to, i), "v");
    if (rc == GRIFFIN_OK) rc = griffin_commit(t);
    griffin_txn_destroy(t);

    if (rc == GRIFFIN_OK) {
      {
        // Stamp and record under the same lock so an observer that walks the
        // history sees every event whose stamp precedes its own.
        std::lock_guard<std::mutex> g(tok.mu);
        uint64_t c = sh->stamp.fetch_add(1, std::memory_order_relaxed);
        tok.hist.push_back(Event{b, c, to});
      }
      tok.region.store(to, std::memory_order_relaxed);
      sh->moves.fetch_add(1, std::memory_order_relaxed);
    } else {
      sh->mover_aborts.fetch_add(1, std::memory_order_relaxed);
    }
    // Claim is released only after the history append, so a token whose
    // claim is free has no committed-but-unrecorded move.
    tok.claimed.store(false, std::memory_order_release);
  }
}

// Binary search over the sorted rows a scan returned.
bool scan_has(const KvVec& rows, const std::string& key) {
  auto it = std::lower_bound(
      rows.begin(), rows.end(), key,
      [](const std::pair<std::string, std::string>& r, const std::string& k) {
        return r.first < k;
      });
  return it != rows.end() && it->first == key;
}

void observer_main(Shared* sh) {
  const uint32_t n = sh->opt->tokens;
  const std::string a_lo = key_of(0, 0), a_hi = key_of(0, 9999);
  const std::string b_lo = key_of(1, 0), b_hi = key_of(1, 9999);
  KvVec a1, a2, b1, b2;
  while (!sh->stop.load(std::memory_order_relaxed)) {
    uint64_t s_begin = sh->stamp.fetch_add(1, std::memory_order_relaxed);
    griffin_txn_t* t = nullptr;
    if (griffin_txn_begin_flags(sh->db, sh->txn_flags, &t) != GRIFFIN_OK)
      continue;
    int rc = scan_collect(t, a_lo, a_hi, 0, &a1);
    if (rc == GRIFFIN_OK) rc = scan_collect(t, a_lo, a_hi, 0, &a2);
    if (rc == GRIFFIN_OK) rc = scan_collect(t, b_lo, b_hi, 0, &b1);
    if (rc == GRIFFIN_OK) rc = scan_collect(t, b_lo, b_hi, 0, &b2);
    if (rc == GRIFFIN_OK) rc = griffin_commit(t);
    griffin_txn_destroy(t);
    if (rc != GRIFFIN_OK) {
      sh->observer_aborts.fetch_add(1, std::memory_order_relaxed);
      continue;
    }
    uint64_t s_end = sh->stamp.fetch_add(1, std::memory_order_relaxed);
    sh->observations.fetch_add(1, std::memory_order_relaxed);

    if (a1.size() + b1.size() != n) {
      sh->conservation.fetch_add(1, std::memory_order_relaxed);
      sh->note("token count off across regions", uint32_t(a1.size()));
    }
    if (a1 != a2 || b1 != b2) {
      sh->repeatability.fetch_add(1, std::memory_order_relaxed);
      sh->note("same-transaction rescan disagreed", 0);
    }

    for (uint32_t i = 0; i < n; i++) {
      Token& tok = *sh->toks[i];
      // A held claim can hide a move that committed but is not yet in the
      // history; such a token is unpredictable, skip it.
      if (tok.claimed.load(std::memory_order_acquire)) continue;
      int predicted = -1;
      {
        std::lock_guard<std::mutex> g(tok.mu);
        // Walk back to the last move that finished before the observation
        // began; if a later move started before the observation ended, the
        // token was in motion and its position is not predictable.
        size_t k = tok.hist.size();
        while (k > 0 && tok.hist[k - 1].commit_stamp >= s_begin) k--;
        if (k > 0 && (k == tok.hist.size() ||
                      tok.hist[k].begin_stamp > s_end))
          predicted = tok.hist[k - 1].to_region;
      }
      if (predicted < 0) continue;
      sh->prediction_checks.fetch_add(1, std::memory_order_relaxed);
      const KvVec& in = predicted == 0 ? a1 : b1;
      const KvVec& out = predicted == 0 ? b1 : a1;
      if (!scan_has(in, key_of(predicted, i)) ||
          scan_has(out, key_of(1 - predicted, i))) {
        sh->prediction.fetch_add(1, std::memory_order_relaxed);
        sh->note("settled token observed in wrong region", i);
      }
    }
  }
}

}  // namespace

StressResult run_token_stress(const StressOptions& opt) {
  StressResult res;

  griffin_config_t cfg;
  griffin_config_init(&cfg);
  cfg.engine = opt.engine;
  cfg.capacity_slots = 1 << 16;
  cfg.sync_interval_us = opt.sync_interval_us;
  cfg.sync_autostart = opt.sync_autostart;
  cfg.coop_sync_ops = opt.coop_sync_ops;
  cfg.debug_disable_scan_update_check = opt.disable_scan_update_check ? 1 : 0;
  cfg.debug_disable_rescan_validation = opt.disable_rescan_validation ? 1 : 0;
  griffin_db_t* db = nullptr;
  if (griffin_open(&cfg, &db) != GRIFFIN_OK) {
    res.detail = "open failed";
    return res;
  }

  Shared sh;
  sh.opt = &opt;
  sh.db = db;
  if (opt.atomic_writes) sh.txn_flags |= GRIFFIN_TXN_ATOMIC_WRITES;
  sh.toks.reserve(opt.tokens);
  for (uint32_t i = 0; i < opt.tokens; i++) {
    sh.toks.push_back(std::make_unique<Token>());
    // Synthetic "move" zero places every token in region A before any
    // observation can begin, so prediction always has a base case.
    sh.toks.back()->hist.push_back(Event{0, 0, 0});
  }

  // Seed all tokens committed and fully synchronized.
  {
    griffin_txn_t* t = nullptr;
    griffin_txn_begin(db, &t);
    int rc = GRIFFIN_OK;
    for (uint32_t i = 0; i < opt.tokens && rc == GRIFFIN_OK; i++)
      rc = insert_str(t, key_of(0, i), "v");
    if (rc == GRIFFIN_OK) rc = griffin_commit(t);
    griffin_txn_destroy(t);
    griffin_sync_pass(db);
    if (rc != GRIFFIN_OK) {
      res.detail = "seeding failed";
      griffin_close(db);
      return res;
    }
  }

  std::vector<std::thread> threads;
  for (int m = 0; m < opt.movers; m++)
    threads.emplace_back(mover_main, &sh, opt.seed + 0x1000 + m);
  for (int o = 0; o < opt.observers; o++)
    threads.emplace_back(observer_main, &sh);
  std::this_thread::sleep_for(std::chrono::duration<double>(opt.duration_s));
  sh.stop.store(true, std::memory_order_relaxed);
  for (auto& th : threads) th.join();

  // Quiesce: all transactions are finalized, so two passes must drain every
  // terminal lock entry and make the ordered view current.
  griffin_sync_pass(db);
  griffin_sync_pass(db);

  griffin_stats_t st;
  griffin_stats(db, &st);
  res.invariant_violations = st.invariant_violations;
  res.lists_drained = st.update_locks_len == 0 && st.scan_locks_len == 0;

  // Convergence: the committed state must be exactly one key per token, in
  // the region the shadow state says, by both full scan and point lookup.
  {
    bool ok = true;
    griffin_txn_t* t = nullptr;
    griffin_txn_begin(db, &t);
    KvVec rows;
    if (scan_collect(t, key_of(0, 0), key_of(1, 9999), 0, &rows) != GRIFFIN_OK)
      ok = false;
    KvVec want;
    for (uint32_t i = 0; i < opt.tokens; i++)
      want.emplace_back(key_of(sh.toks[i]->region.load(), i), "v");
    std::sort(want.begin(), want.end());
    if (rows != want) ok = false;
    std::string val;
    for (uint32_t i = 0; i < opt.tokens && ok; i++) {
      int reg = sh.toks[i]->region.load();
      bool found = false;
      lookup_str(t, key_of(reg, i), &val, &found);
      if (!found) ok = false;
      lookup_str(t, key_of(1 - reg, i), &val, &found);
      if (found) ok = false;
    }
    griffin_commit(t);
    griffin_txn_destroy(t);
    res.converged = ok;
    if (!ok) sh.note("final state does not match shadow state", 0);
  }

  res.moves_committed = sh.moves.load();
  res.observations = sh.observations.load();
  res.mover_aborts = sh.mover_aborts.load();
  res.observer_aborts = sh.observer_aborts.load();
  res.conservation_violations = sh.conservation.load();
  res.repeatability_violations = sh.repeatability.load();
  res.prediction_violations = sh.prediction.load();
  res.prediction_checks = sh.prediction_checks.load();
  res.detail = sh.detail;

  griffin_close(db);
  return res;
}

}  // namespace griffin::harness
