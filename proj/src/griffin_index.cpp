#include "griffin/griffin_index.hpp"

#include <chrono>
#include <vector>

namespace griffin {

namespace {

inline uint64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}


}  // namespace

GriffinIndex::GriffinIndex(const Config& cfg)
    : EngineBase(cfg),
      ps_(cfg.capacity_slots, cfg.max_load_factor, cfg.hash_seed),
      rs_(cfg.hash_seed),
      sync_(ps_, rs_, lu_, lp_, ctrs_, cfg.profile_ops) {
  if (cfg_.sync_autostart) sync_.start(cfg_.sync_interval_us);
}

GriffinIndex::~GriffinIndex() {
  sync_.stop();
  // Drain finished work so the store destructors own every record. Bounded:
  // a leaked active txn would pin its entries forever, and the list
  // destructors handle those.
  for (int i = 0; i < 64 && !sync_.lists_empty(); i++) sync_.pass();
  EpochDomain::global().flush();
  EpochDomain::global().flush();
}

Status GriffinIndex::txn_begin(Txn* t, uint32_t flags) {
  if (!t || t->state == TxnStatus::Active) return Status::Invalid;
  txn_cleanup(t);
  t->reset();
  t->tag = new TxnTag();
  t->flags = flags;
  t->state = TxnStatus::Active;
  ctrs_.add(Ctr::txn_begun);
  return Status::Ok;
}

Status GriffinIndex::lookup(Txn* t, std::string_view key, std::string* out) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!key_valid(key)) return Status::Invalid;
  ctrs_.add(Ctr::lookups);
  Status st = ps_.lookup(key, out);
  if (st == Status::Ok) ctrs_.add(Ctr::lookup_hits);
  return st;
}

Status GriffinIndex::insert(Txn* t, std::string_view key,
                            std::string_view value) {
  return update_common(t, OpKind::Insert, key, value);
}

Status GriffinIndex::erase(Txn* t, std::string_view key) {
  return update_common(t, OpKind::Delete, key, {});
}

Status GriffinIndex::update_common(Txn* t, OpKind kind, std::string_view key,
                                   std::string_view value) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!key_valid(key)) return Status::Invalid;
  if (t->wrote_key(key)) return finalize_abort(t, Status::Fault);

  const bool prof = cfg_.profile_ops;
  uint64_t t0 = prof ? now_ns() : 0;

  // Publish our own intent first ...
  UpdateEntry* e = UpdateEntry::make(t->tag, kind, key);
  lu_.append(e);
  ctrs_.add(Ctr::lu_appends);
  if (prof) ctrs_.add(Ctr::ns_update_log, now_ns() - t0);

  // ... so that after this fence, any scan that our check below misses is
  // guaranteed to see our entry when it runs its own check.
  std::atomic_thread_fence(std::memory_order_seq_cst);

  if (!cfg_.debug_disable_update_scan_check) {
    uint64_t t1 = prof ? now_ns() : 0;
    ConflictHit hit = lp_.conflicts_with_key(key, t->tag);
    ctrs_.add(Ctr::lp_checks);
    ctrs_.add(Ctr::lp_nodes_visited, hit.visited);
    if (prof) ctrs_.add(Ctr::ns_scan_lock_check, now_ns() - t1);
    // Mutating this key would invalidate a range somebody has read (or is
    // reading); their entry stays relevant until it is swept, so we back off
    // without looking at the owner's state.
    if (hit.found) return finalize_abort(t, Status::AbortPhantom);
  }

  uint64_t t2 = prof ? now_ns() : 0;
  PointStore::MutRes r = (kind == OpKind::Insert)
                             ? ps_.insert(key, value, t->tag)
                             : ps_.erase(key, t->tag);
  if (prof) ctrs_.add(Ctr::ns_point_store, now_ns() - t2);
  if (r.st != Status::Ok) return finalize_abort(t, r.st);

  e->applied = true;  // ordered before the terminal status store at finalize
  e->rec = r.rec;
  t->update_keys.emplace_back(key);
  ctrs_.add(kind == OpKind::Insert ? Ctr::inserts_ok : Ctr::deletes_ok);
  return Status::Ok;
}

Status GriffinIndex::scan(Txn* t, std::string_view begin, std::string_view end,
                          size_t limit, ScanSink sink, void* ctx) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!key_valid(begin) || !key_valid(end) || key_compare(begin, end) > 0)
    return Status::Invalid;

  ScanEntry* e = ScanEntry::make(t->tag, begin, end);
  lp_.append(e);
  ctrs_.add(Ctr::lp_appends);

  std::atomic_thread_fence(std::memory_order_seq_cst);

  if (!cfg_.debug_disable_scan_update_check) {
    ConflictHit hit = lu_.conflicts_with_range(KeyRange{Key(begin), Key(end)},
                                               t->tag);
    ctrs_.add(Ctr::lu_checks);
    ctrs_.add(Ctr::lu_nodes_visited, hit.visited);
    if (hit.found) {
      // A committed-but-unsynchronized update means the ordered index may
      // not reflect it yet: reading now could return stale data. Anything
      // else is a write in flight over our range.
      return finalize_abort(t, hit.status == TxnStatus::Committed
                                   ? Status::AbortStaleRead
                                   : Status::AbortPhantom);
    }
  }

  size_t emitted = 0;
  {
    // The views handed to the sink alias tree nodes; the guard keeps them
    // (and `last`, read by the narrowing step) alive through this block.
    EpochDomain::Guard g;
    ctrs_.add(Ctr::tree_reads);
    std::string_view last;
    bool stopped = false;
    rs_.scan(begin, end, limit, [&](std::string_view k, const std::string& v) {
      emitted++;
      last = k;
      if (sink && !sink(ctx, k, v)) {
        stopped = true;
        return false;
      }
      return true;
    });

    // Result truncated before the range was exhausted: everything past the
    // last key we read was never observed, so stop protecting it. A walk
    // that ran to completion also observed the *absence* of keys after the
    // last hit, so it keeps the full range.
    if ((stopped || (limit != 0 && emitted == limit)) && emitted > 0 &&
        key_compare(last, end) < 0)
      e->narrow(last);
  }

  ctrs_.add(Ctr::scans_ok);
  ctrs_.add(Ctr::scan_keys_returned, emitted);
  return Status::Ok;
}

Status GriffinIndex::commit(Txn* t) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  t->tag->status.store(TxnStatus::Committed, std::memory_order_release);
  t->state = TxnStatus::Committed;
  ctrs_.add(Ctr::txn_committed);
  after_finalize(t);
  return Status::Ok;
}

Status GriffinIndex::abort(Txn* t) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  t->tag->status.store(TxnStatus::Aborted, std::memory_order_release);
  t->state = TxnStatus::Aborted;
  ctrs_.add(Ctr::txn_aborted);
  after_finalize(t);
  return Status::Ok;
}

Status GriffinIndex::finalize_abort(Txn* t, Status reason) {
  t->tag->status.store(TxnStatus::Aborted, std::memory_order_release);
  t->state = TxnStatus::Aborted;
  ctrs_.add(Ctr::txn_aborted);
  switch (reason) {
    case Status::AbortPhantom: ctrs_.add(Ctr::aborts_phantom); break;
    case Status::AbortStaleRead: ctrs_.add(Ctr::aborts_stale_read); break;
    case Status::AbortKeyExists: ctrs_.add(Ctr::aborts_key_exists); break;
    case Status::AbortKeyNotFound: ctrs_.add(Ctr::aborts_key_not_found); break;
    default: break;
  }
  after_finalize(t);
  return reason;
}

void GriffinIndex::after_finalize(Txn*) {
  if (cfg_.coop_sync_ops != 0) {
    uint64_t n = finalize_seq_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n % cfg_.coop_sync_ops == 0 && !sync_.lists_empty()) sync_.try_pass();
  }
  // Workers retire records as they go; let each thread drain its own bin
  // now and then even when it never runs a sync pass itself.
  thread_local uint32_t fin = 0;
  if ((++fin & 0xff) == 0) EpochDomain::global().flush();
}

void GriffinIndex::txn_cleanup(Txn* t) {
  if (!t) return;
  if (t->state == TxnStatus::Active && t->tag) {
    t->tag->status.store(TxnStatus::Aborted, std::memory_order_release);
    t->state = TxnStatus::Aborted;
    ctrs_.add(Ctr::txn_aborted);
  }
  if (t->tag) {
    TxnTag::unref(t->tag);
    t->tag = nullptr;
  }
}

Status GriffinIndex::sync_start() {
  sync_.start(cfg_.sync_interval_us);
  return Status::Ok;
}

Status GriffinIndex::sync_stop() {
  sync_.stop();
  return Status::Ok;
}

Status GriffinIndex::sync_pass() {
  sync_.pass();
  return Status::Ok;
}

void GriffinIndex::stats(StatsSnapshot* out) {
  *out = StatsSnapshot{};
  out->txns_begun = ctrs_.total(Ctr::txn_begun);
  out->txns_committed = ctrs_.total(Ctr::txn_committed);
  out->txns_aborted = ctrs_.total(Ctr::txn_aborted);
  out->aborts_phantom = ctrs_.total(Ctr::aborts_phantom);
  out->aborts_stale_read = ctrs_.total(Ctr::aborts_stale_read);
  out->aborts_key_exists = ctrs_.total(Ctr::aborts_key_exists);
  out->aborts_key_not_found = ctrs_.total(Ctr::aborts_key_not_found);
  out->lookups = ctrs_.total(Ctr::lookups);
  out->lookup_hits = ctrs_.total(Ctr::lookup_hits);
  out->inserts_ok = ctrs_.total(Ctr::inserts_ok);
  out->deletes_ok = ctrs_.total(Ctr::deletes_ok);
  out->scans_ok = ctrs_.total(Ctr::scans_ok);
  out->scan_keys_returned = ctrs_.total(Ctr::scan_keys_returned);
  out->update_lock_appends = ctrs_.total(Ctr::lu_appends);
  out->scan_lock_appends = ctrs_.total(Ctr::lp_appends);
  out->update_lock_checks = ctrs_.total(Ctr::lu_checks);
  out->scan_lock_checks = ctrs_.total(Ctr::lp_checks);
  out->update_lock_nodes_visited = ctrs_.total(Ctr::lu_nodes_visited);
  out->scan_lock_nodes_visited = ctrs_.total(Ctr::lp_nodes_visited);
  out->tree_reads = ctrs_.total(Ctr::tree_reads);
  out->sync_passes = ctrs_.total(Ctr::sync_passes);
  out->sync_applied = ctrs_.total(Ctr::sync_applied);
  out->sync_rolled_back = ctrs_.total(Ctr::sync_rolled_back);
  out->sync_scan_locks_collected = ctrs_.total(Ctr::sync_lp_collected);
  out->rescans = ctrs_.total(Ctr::rescans);
  out->invariant_violations = ctrs_.total(Ctr::invariant_violations);
  out->update_locks_len = lu_.size();
  out->scan_locks_len = lp_.size();
  out->ns_update_log = ctrs_.total(Ctr::ns_update_log);
  out->ns_point_store = ctrs_.total(Ctr::ns_point_store);
  out->ns_scan_lock_check = ctrs_.total(Ctr::ns_scan_lock_check);
}

}  // namespace griffin
