#include "griffin.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "griffin/engine.hpp"

using griffin::EngineBase;
using griffin::Status;
using griffin::Txn;

struct griffin_db {
  std::unique_ptr<EngineBase> engine;
};

struct griffin_txn {
  griffin_db* db = nullptr;
  Txn txn;
  bool in_pool = false;
};

namespace {

int to_code(Status s) { return static_cast<int>(s); }

static_assert(static_cast<int>(Status::Ok) == GRIFFIN_OK);
static_assert(static_cast<int>(Status::NotFound) == GRIFFIN_NOT_FOUND);
static_assert(static_cast<int>(Status::AbortPhantom) == GRIFFIN_ABORT_PHANTOM);
static_assert(static_cast<int>(Status::AbortStaleRead) ==
              GRIFFIN_ABORT_STALE_READ);
static_assert(static_cast<int>(Status::AbortKeyExists) ==
              GRIFFIN_ABORT_KEY_EXISTS);
static_assert(static_cast<int>(Status::AbortKeyNotFound) ==
              GRIFFIN_ABORT_KEY_NOT_FOUND);
static_assert(static_cast<int>(Status::Invalid) == GRIFFIN_EINVAL);
static_assert(static_cast<int>(Status::Fault) == GRIFFIN_EFAULT);
static_assert(static_cast<int>(Status::Capacity) == GRIFFIN_ECAPACITY);

// Handle pool: txn objects carry grown vectors worth reusing, and handing
// them out per-thread keeps begin/destroy off the allocator.
struct TxnPool {
  std::vector<griffin_txn*> v;
  ~TxnPool() {
    for (griffin_txn* h : v) delete h;
  }
};
thread_local TxnPool t_pool;

griffin_txn* pool_get(griffin_db* db) {
  while (!t_pool.v.empty()) {
    griffin_txn* h = t_pool.v.back();
    t_pool.v.pop_back();
    if (h->db == db) {
      h->in_pool = false;
      return h;
    }
    delete h;  // pooled against a database that is gone or different
  }
  auto* h = new griffin_txn();
  h->db = db;
  return h;
}

}  // namespace

extern "C" {

int griffin_config_init(griffin_config_t* cfg) {
  if (!cfg) return GRIFFIN_EINVAL;
  griffin::Config d;
  cfg->engine = static_cast<int>(d.engine);
  cfg->capacity_slots = d.capacity_slots;
  cfg->max_load_factor = d.max_load_factor;
  cfg->sync_interval_us = d.sync_interval_us;
  cfg->sync_autostart = d.sync_autostart ? 1 : 0;
  cfg->coop_sync_ops = d.coop_sync_ops;
  cfg->full_predicate_validation = d.full_predicate_validation ? 1 : 0;
  cfg->debug_disable_scan_update_check = 0;
  cfg->debug_disable_update_scan_check = 0;
  cfg->debug_disable_rescan_validation = 0;
  cfg->profile_ops = 0;
  cfg->hash_seed = d.hash_seed;
  return GRIFFIN_OK;
}

int griffin_open(const griffin_config_t* cfg, griffin_db_t** out) {
  if (!cfg || !out) return GRIFFIN_EINVAL;
  griffin::Config c;
  c.engine = static_cast<griffin::EngineKind>(cfg->engine);
  c.capacity_slots = cfg->capacity_slots;
  c.max_load_factor = cfg->max_load_factor;
  c.sync_interval_us = cfg->sync_interval_us;
  c.sync_autostart = cfg->sync_autostart != 0;
  c.coop_sync_ops = cfg->coop_sync_ops;
  c.full_predicate_validation = cfg->full_predicate_validation != 0;
  c.debug_disable_scan_update_check = cfg->debug_disable_scan_update_check != 0;
  c.debug_disable_update_scan_check = cfg->debug_disable_update_scan_check != 0;
  c.debug_disable_rescan_validation = cfg->debug_disable_rescan_validation != 0;
  c.profile_ops = cfg->profile_ops != 0;
  c.hash_seed = cfg->hash_seed;
  auto engine = griffin::make_engine(c);
  if (!engine) return GRIFFIN_EINVAL;
  auto* db = new griffin_db();
  db->engine = std::move(engine);
  *out = db;
  return GRIFFIN_OK;
}

int griffin_close(griffin_db_t* db) {
  if (!db) return GRIFFIN_EINVAL;
  delete db;
  return GRIFFIN_OK;
}

int griffin_txn_begin_flags(griffin_db_t* db, uint32_t flags,
                            griffin_txn_t** out) {
  if (!db || !out) return GRIFFIN_EINVAL;
  griffin_txn* h = pool_get(db);
  Status st = db->engine->txn_begin(&h->txn, flags);
  if (st != Status::Ok) {
    h->in_pool = true;
    t_pool.v.push_back(h);
    return to_code(st);
  }
  *out = h;
  return GRIFFIN_OK;
}

int griffin_txn_begin(griffin_db_t* db, griffin_txn_t** out) {
  return griffin_txn_begin_flags(db, 0, out);
}

int griffin_commit(griffin_txn_t* txn) {
  if (!txn || txn->in_pool) return GRIFFIN_EINVAL;
  return to_code(txn->db->engine->commit(&txn->txn));
}

int griffin_abort(griffin_txn_t* txn) {
  if (!txn || txn->in_pool) return GRIFFIN_EINVAL;
  return to_code(txn->db->engine->abort(&txn->txn));
}

int griffin_txn_destroy(griffin_txn_t* txn) {
  if (!txn || txn->in_pool) return GRIFFIN_EINVAL;
  txn->db->engine->txn_cleanup(&txn->txn);
  txn->txn.reset();
  txn->in_pool = true;
  t_pool.v.push_back(txn);
  return GRIFFIN_OK;
}

int griffin_lookup(griffin_txn_t* txn, const char* key, size_t key_len,
                   char* val_buf, size_t val_cap, size_t* val_len) {
  if (!txn || txn->in_pool || !key || !val_len) return GRIFFIN_EINVAL;
  std::string val;
  Status st = txn->db->engine->lookup(&txn->txn, {key, key_len}, &val);
  if (st != Status::Ok) return to_code(st);
  *val_len = val.size();
  if (val.size() > val_cap) return GRIFFIN_EINVAL;
  if (!val.empty()) std::memcpy(val_buf, val.data(), val.size());
  return GRIFFIN_OK;
}

int griffin_insert(griffin_txn_t* txn, const char* key, size_t key_len,
                   const char* val, size_t val_len) {
  if (!txn || txn->in_pool || !key || (!val && val_len)) return GRIFFIN_EINVAL;
  return to_code(
      txn->db->engine->insert(&txn->txn, {key, key_len}, {val, val_len}));
}

int griffin_delete(griffin_txn_t* txn, const char* key, size_t key_len) {
  if (!txn || txn->in_pool || !key) return GRIFFIN_EINVAL;
  return to_code(txn->db->engine->erase(&txn->txn, {key, key_len}));
}

int griffin_scan(griffin_txn_t* txn, const char* begin, size_t begin_len,
                 const char* end, size_t end_len, size_t limit,
                 griffin_scan_cb cb, void* ctx) {
  if (!txn || txn->in_pool || !begin || !end) return GRIFFIN_EINVAL;
  struct Bridge {
    griffin_scan_cb cb;
    void* ctx;
  } bridge{cb, ctx};
  griffin::ScanSink sink = [](void* bctx, std::string_view k,
                              std::string_view v) {
    auto* b = static_cast<Bridge*>(bctx);
    if (!b->cb) return true;
    return b->cb(b->ctx, k.data(), k.size(), v.data(), v.size()) == 0;
  };
  return to_code(txn->db->engine->scan(&txn->txn, {begin, begin_len},
                                       {end, end_len}, limit, sink, &bridge));
}

int griffin_sync_start(griffin_db_t* db) {
  if (!db) return GRIFFIN_EINVAL;
  return to_code(db->engine->sync_start());
}

int griffin_sync_stop(griffin_db_t* db) {
  if (!db) return GRIFFIN_EINVAL;
  return to_code(db->engine->sync_stop());
}

int griffin_sync_pass(griffin_db_t* db) {
  if (!db) return GRIFFIN_EINVAL;
  return to_code(db->engine->sync_pass());
}

int griffin_stats(griffin_db_t* db, griffin_stats_t* out) {
  if (!db || !out) return GRIFFIN_EINVAL;
  griffin::StatsSnapshot s;
  db->engine->stats(&s);
  out->txns_begun = s.txns_begun;
  out->txns_committed = s.txns_committed;
  out->txns_aborted = s.txns_aborted;
  out->aborts_phantom = s.aborts_phantom;
  out->aborts_stale_read = s.aborts_stale_read;
  out->aborts_key_exists = s.aborts_key_exists;
  out->aborts_key_not_found = s.aborts_key_not_found;
  out->lookups = s.lookups;
  out->lookup_hits = s.lookup_hits;
  out->inserts_ok = s.inserts_ok;
  out->deletes_ok = s.deletes_ok;
  out->scans_ok = s.scans_ok;
  out->scan_keys_returned = s.scan_keys_returned;
  out->update_lock_appends = s.update_lock_appends;
  out->scan_lock_appends = s.scan_lock_appends;
  out->update_lock_checks = s.update_lock_checks;
  out->scan_lock_checks = s.scan_lock_checks;
  out->update_lock_nodes_visited = s.update_lock_nodes_visited;
  out->scan_lock_nodes_visited = s.scan_lock_nodes_visited;
  out->tree_reads = s.tree_reads;
  out->sync_passes = s.sync_passes;
  out->sync_applied = s.sync_applied;
  out->sync_rolled_back = s.sync_rolled_back;
  out->sync_scan_locks_collected = s.sync_scan_locks_collected;
  out->rescans = s.rescans;
  out->invariant_violations = s.invariant_violations;
  out->update_locks_len = s.update_locks_len;
  out->scan_locks_len = s.scan_locks_len;
  out->ns_update_log = s.ns_update_log;
  out->ns_point_store = s.ns_point_store;
  out->ns_scan_lock_check = s.ns_scan_lock_check;
  return GRIFFIN_OK;
}

const char* griffin_strerror(int status) {
  switch (status) {
    case GRIFFIN_OK: return "ok";
    case GRIFFIN_NOT_FOUND: return "not found";
    case GRIFFIN_ABORT_PHANTOM: return "aborted: conflicting range and update";
    case GRIFFIN_ABORT_STALE_READ: return "aborted: range not yet current";
    case GRIFFIN_ABORT_KEY_EXISTS: return "aborted: key already exists";
    case GRIFFIN_ABORT_KEY_NOT_FOUND: return "aborted: key not found";
    case GRIFFIN_EINVAL: return "invalid argument or handle state";
    case GRIFFIN_EFAULT: return "engine fault";
    case GRIFFIN_ECAPACITY: return "aborted: capacity exhausted";
    default: return "unknown status";
  }
}

}  // extern "C"
