#include "griffin/harness/replay.hpp"

#include <cinttypes>
#include <cstdio>

#include "griffin/harness/capi_util.hpp"
#include "griffin/harness/reference.hpp"

namespace griffin::harness {

namespace {

std::string ukey(uint32_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "k%04u", i);
  return buf;
}

std::string rand_value(Rng& rng) {
  static const char kHex[] = "0123456789abcdef";
  size_t len = rng.below(13);  // 0..12, empty values are legal
  std::string v;
  v.reserve(len);
  for (size_t i = 0; i < len; i++) v.push_back(kHex[rng.below(16)]);
  return v;
}

int map_ref(RefStatus s) {
  switch (s) {
    case RefStatus::Ok: return GRIFFIN_OK;
    case RefStatus::NotFound: return GRIFFIN_NOT_FOUND;
    case RefStatus::AbortKeyExists: return GRIFFIN_ABORT_KEY_EXISTS;
    case RefStatus::AbortKeyNotFound: return GRIFFIN_ABORT_KEY_NOT_FOUND;
    case RefStatus::Invalid: return GRIFFIN_EINVAL;
    case RefStatus::Fault: return GRIFFIN_EFAULT;
  }
  return -1;
}

struct Diverged {
  uint64_t count = 0;
  std::string first;
  void note(const char* what, uint64_t op_no) {
    count++;
    if (first.empty()) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "op %" PRIu64 ": %s", op_no, what);
      first = buf;
    }
  }
};

}  // namespace

ReplayResult replay_sequential(const ReplayOptions& opt) {
  ReplayResult res;
  Diverged div;

  griffin_config_t cfg;
  griffin_config_init(&cfg);
  cfg.engine = opt.engine;
  cfg.capacity_slots = 1 << 16;
  cfg.sync_autostart = 0;  // replay steps the synchronization by hand
  griffin_db_t* db = nullptr;
  if (griffin_open(&cfg, &db) != GRIFFIN_OK) {
    res.divergences = 1;
    res.first_divergence = "open failed";
    return res;
  }

  ReferenceModel model;
  Rng rng(opt.seed);
  KvVec got, want;
  std::string eng_val, ref_val;

  auto step = [&] {
    griffin_sync_pass(db);
    griffin_sync_pass(db);
  };

  auto full_check = [&](uint64_t op_no) {
    griffin_txn_t* t = nullptr;
    if (griffin_txn_begin(db, &t) != GRIFFIN_OK) {
      div.note("begin failed during full check", op_no);
      return;
    }
    // Whole-range scan against the committed map.
    if (scan_collect(t, ukey(0), ukey(opt.universe - 1), 0, &got) !=
        GRIFFIN_OK) {
      div.note("full-range scan failed", op_no);
    } else {
      want.assign(model.committed().begin(), model.committed().end());
      if (got != want) div.note("full-range scan state mismatch", op_no);
    }
    // Per-key lookups across the whole universe.
    for (uint32_t i = 0; i < opt.universe; i++) {
      std::string k = ukey(i);
      bool found;
      lookup_str(t, k, &eng_val, &found);
      auto it = model.committed().find(k);
      bool ref_found = it != model.committed().end();
      if (found != ref_found || (found && eng_val != it->second)) {
        div.note("lookup state mismatch", op_no);
        break;
      }
    }
    griffin_commit(t);
    griffin_txn_destroy(t);
    step();
  };

  uint64_t op_no = 0;
  while (op_no < opt.ops) {
    res.txns_run++;
    uint64_t shape = rng.below(100);

    // Build the txn's op list up front so the rng stream never depends on
    // engine outcomes.
    struct Op {
      int kind;  // 0 insert, 1 delete, 2 lookup, 3 scan
      std::string key, value, end;
      size_t limit = 0;
    };
    std::vector<Op> ops;
    auto add_update = [&](bool ins) {
      Op o;
      o.kind = ins ? 0 : 1;
      o.key = ukey(uint32_t(rng.below(opt.universe)));
      if (ins) o.value = rand_value(rng);
      ops.push_back(std::move(o));
    };
    auto add_scan = [&] {
      uint32_t a = uint32_t(rng.below(opt.universe));
      uint32_t b = uint32_t(rng.below(opt.universe));
      if (a > b) std::swap(a, b);
      static const size_t kLimits[] = {0, 1, 3, 10};
      ops.push_back(Op{3, ukey(a), {}, ukey(b), kLimits[rng.below(4)]});
    };

    if (shape < 25) {
      add_update(true);
    } else if (shape < 45) {
      add_update(false);
    } else if (shape < 65) {
      ops.push_back(Op{2, ukey(uint32_t(rng.below(opt.universe))), {}, {}, 0});
    } else if (shape < 80) {
      add_scan();
    } else if (shape < 90) {
      // Multi-update txn; duplicate keys are intentionally possible so the
      // one-write-per-key rule is exercised on both sides.
      size_t n = 2 + rng.below(3);
      for (size_t i = 0; i < n; i++) add_update(rng.below(2) == 0);
    } else {
      // Range read first, then point reads; reads never follow own writes so
      // lazy and eager engines stay comparable.
      add_scan();
      ops.push_back(Op{2, ukey(uint32_t(rng.below(opt.universe))), {}, {}, 0});
      ops.push_back(Op{2, ukey(uint32_t(rng.below(opt.universe))), {}, {}, 0});
    }

    griffin_txn_t* t = nullptr;
    if (griffin_txn_begin(db, &t) != GRIFFIN_OK) {
      div.note("txn_begin failed", op_no);
      break;
    }
    model.begin();
    bool finished = false;  // engine txn auto-finalized by an abort

    for (const Op& o : ops) {
      op_no++;
      res.ops_executed++;
      int erc = -1, rrc = -1;
      switch (o.kind) {
        case 0:
          erc = insert_str(t, o.key, o.value);
          rrc = map_ref(model.insert(o.key, o.value));
          break;
        case 1:
          erc = delete_str(t, o.key);
          rrc = map_ref(model.erase(o.key));
          break;
        case 2: {
          bool found;
          erc = lookup_str(t, o.key, &eng_val, &found);
          RefStatus rs = model.lookup(o.key, &ref_val);
          rrc = map_ref(rs);
          if (erc == GRIFFIN_OK && rs == RefStatus::Ok && eng_val != ref_val)
            div.note("lookup value mismatch", op_no);
          break;
        }
        case 3: {
          erc = scan_collect(t, o.key, o.end, o.limit, &got);
          std::vector<std::pair<std::string, std::string>> ref_rows;
          RefStatus rs = model.scan(o.key, o.end, o.limit, &ref_rows);
          rrc = map_ref(rs);
          if (erc == GRIFFIN_OK && rs == RefStatus::Ok && got != ref_rows)
            div.note("scan result mismatch", op_no);
          break;
        }
      }
      if (erc != rrc) div.note("status code mismatch", op_no);
      if (erc != GRIFFIN_OK && erc != GRIFFIN_NOT_FOUND) {
        finished = true;  // aborted (model mirrored it); drop rest of txn
        break;
      }
    }

    if (!finished) {
      int erc = griffin_commit(t);
      int rrc = map_ref(model.commit());
      if (erc != rrc) div.note("commit status mismatch", op_no);
    }
    griffin_txn_destroy(t);
    step();

    if (opt.check_every && res.txns_run % opt.check_every == 0)
      full_check(op_no);
  }

  full_check(op_no);

  griffin_stats_t st;
  griffin_stats(db, &st);
  res.invariant_violations = st.invariant_violations;
  if (st.update_locks_len != 0 || st.scan_locks_len != 0)
    div.note("lock lists not drained at quiescence", op_no);
  if (st.aborts_phantom != 0 || st.aborts_stale_read != 0)
    div.note("conflict abort in a sequential stream", op_no);

  griffin_close(db);
  res.divergences = div.count;
  res.first_divergence = div.first;
  return res;
}

}  // namespace griffin::harness
