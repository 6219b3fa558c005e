#include "griffin/harness/scenarios.hpp"

#include <chrono>
#include <cstdio>

#include "griffin/harness/capi_util.hpp"

namespace griffin::harness {

namespace {

struct Script {
  ScenarioResult res;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void expect(bool ok, const char* what) {
    if (ok || !res.passed) return;
    res.passed = false;
    res.detail = what;
  }
  void expect_rc(int got, int want, const char* what) {
    if (got == want || !res.passed) return;
    res.passed = false;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: got %s, want %s", what,
                  griffin_strerror(got), griffin_strerror(want));
    res.detail = buf;
  }
  ScenarioResult finish() {
    res.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return res;
  }
};

griffin_db_t* open_db() {
  griffin_config_t cfg;
  griffin_config_init(&cfg);
  cfg.engine = GRIFFIN_ENGINE_GRIFFIN;
  cfg.capacity_slots = 1 << 12;
  cfg.sync_autostart = 0;  // scripts trigger sync passes explicitly
  griffin_db_t* db = nullptr;
  griffin_open(&cfg, &db);
  return db;
}

// Seeds one committed, fully synchronized key.
void seed(griffin_db_t* db, const std::string& k, const std::string& v) {
  griffin_txn_t* t = nullptr;
  griffin_txn_begin(db, &t);
  insert_str(t, k, v);
  griffin_commit(t);
  griffin_txn_destroy(t);
  griffin_sync_pass(db);
}

}  // namespace

ScenarioResult scenario_phantom() {
  Script s;
  griffin_db_t* db = open_db();
  s.expect(db != nullptr, "open failed");
  if (!db) return s.finish();
  seed(db, "pa", "1");
  seed(db, "pz", "9");

  // (a) writer aborts: the scanning transaction is still live when the
  // writer tries to add a key inside the scanned range.
  {
    griffin_txn_t *scn = nullptr, *wrt = nullptr;
    griffin_txn_begin(db, &scn);
    griffin_txn_begin(db, &wrt);
    KvVec rows;
    s.expect_rc(scan_collect(scn, "pa", "pz", 0, &rows), GRIFFIN_OK,
                "initial scan");
    s.expect(rows.size() == 2, "initial scan should see both seeded keys");
    s.expect_rc(insert_str(wrt, "pm", "2"), GRIFFIN_ABORT_PHANTOM,
                "insert into live-scanned range");
    s.expect_rc(griffin_commit(scn), GRIFFIN_OK, "scanner commit");
    griffin_txn_destroy(scn);
    griffin_txn_destroy(wrt);
  }

  // The aborted insert must have left nothing behind.
  {
    griffin_txn_t* t = nullptr;
    griffin_txn_begin(db, &t);
    char buf[16];
    size_t len = 0;
    s.expect_rc(griffin_lookup(t, "pm", 2, buf, sizeof buf, &len),
                GRIFFIN_NOT_FOUND, "aborted insert visible");
    griffin_commit(t);
    griffin_txn_destroy(t);
  }

  // (b) scanner aborts: a live transaction holds an uncommitted insert and
  // the scanner's range covers it. Sweep first so (a)'s finished lock
  // entries cannot interfere.
  griffin_sync_pass(db);
  {
    griffin_txn_t *wrt = nullptr, *scn = nullptr;
    griffin_txn_begin(db, &wrt);
    s.expect_rc(insert_str(wrt, "pm", "2"), GRIFFIN_OK, "uncontested insert");
    griffin_txn_begin(db, &scn);
    KvVec rows;
    s.expect_rc(scan_collect(scn, "pa", "pz", 0, &rows), GRIFFIN_ABORT_PHANTOM,
                "scan over uncommitted insert");
    s.expect_rc(griffin_commit(wrt), GRIFFIN_OK, "writer commit");
    griffin_txn_destroy(wrt);
    griffin_txn_destroy(scn);
  }

  // After a sync pass the committed key is part of the ordered view.
  griffin_sync_pass(db);
  {
    griffin_txn_t* t = nullptr;
    griffin_txn_begin(db, &t);
    KvVec rows;
    s.expect_rc(scan_collect(t, "pa", "pz", 0, &rows), GRIFFIN_OK,
                "post-sync scan");
    s.expect(rows.size() == 3 && rows[1].first == "pm",
             "post-sync scan should include the committed key");
    griffin_commit(t);
    griffin_txn_destroy(t);
  }

  griffin_stats_t st;
  griffin_stats(db, &st);
  s.expect(st.aborts_phantom == 2, "exactly two phantom aborts expected");
  s.expect(st.invariant_violations == 0, "invariant violation recorded");
  griffin_close(db);
  return s.finish();
}

ScenarioResult scenario_stale_read() {
  Script s;
  griffin_db_t* db = open_db();
  s.expect(db != nullptr, "open failed");
  if (!db) return s.finish();
  seed(db, "sa", "1");
  seed(db, "sz", "9");

  // Insert variant: commit a key but run no sync pass, so the ordered view
  // lags the point store.
  {
    griffin_txn_t* w = nullptr;
    griffin_txn_begin(db, &w);
    s.expect_rc(insert_str(w, "sm", "5"), GRIFFIN_OK, "insert");
    s.expect_rc(griffin_commit(w), GRIFFIN_OK, "insert commit");
    griffin_txn_destroy(w);

    griffin_txn_t* t = nullptr;
    griffin_txn_begin(db, &t);
    KvVec rows;
    s.expect_rc(scan_collect(t, "sa", "sz", 0, &rows),
                GRIFFIN_ABORT_STALE_READ, "scan over committed-unsynced key");
    griffin_txn_destroy(t);

    griffin_sync_pass(db);
    griffin_txn_begin(db, &t);
    s.expect_rc(scan_collect(t, "sa", "sz", 0, &rows), GRIFFIN_OK,
                "post-sync scan");
    s.expect(rows.size() == 3 && rows[1].first == "sm" &&
                 rows[1].second == "5",
             "post-sync scan should include the new key");
    griffin_commit(t);
    griffin_txn_destroy(t);
  }

  // Delete variant: same shape, the pending write removes a key instead.
  // Sweep first so the verification scan's finished lock entry cannot
  // interfere with the delete.
  griffin_sync_pass(db);
  {
    griffin_txn_t* w = nullptr;
    griffin_txn_begin(db, &w);
    s.expect_rc(delete_str(w, "sm"), GRIFFIN_OK, "delete");
    s.expect_rc(griffin_commit(w), GRIFFIN_OK, "delete commit");
    griffin_txn_destroy(w);

    griffin_txn_t* t = nullptr;
    griffin_txn_begin(db, &t);
    KvVec rows;
    s.expect_rc(scan_collect(t, "sa", "sz", 0, &rows),
                GRIFFIN_ABORT_STALE_READ, "scan over committed-unsynced delete");
    griffin_txn_destroy(t);

    griffin_sync_pass(db);
    griffin_txn_begin(db, &t);
    s.expect_rc(scan_collect(t, "sa", "sz", 0, &rows), GRIFFIN_OK,
                "post-sync scan after delete");
    s.expect(rows.size() == 2, "post-sync scan should exclude the deleted key");
    char buf[16];
    size_t len = 0;
    s.expect_rc(griffin_lookup(t, "sm", 2, buf, sizeof buf, &len),
                GRIFFIN_NOT_FOUND, "deleted key lookup");
    griffin_commit(t);
    griffin_txn_destroy(t);
  }

  griffin_stats_t st;
  griffin_stats(db, &st);
  s.expect(st.aborts_stale_read == 2, "exactly two stale-read aborts expected");
  s.expect(st.invariant_violations == 0, "invariant violation recorded");
  griffin_close(db);
  return s.finish();
}

}  // namespace griffin::harness
