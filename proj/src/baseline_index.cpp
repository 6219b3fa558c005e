#include "griffin/baseline_index.hpp"

namespace griffin {

namespace {

// Order-sensitive fingerprint of a (key, value) stream.
inline uint64_t digest_step(uint64_t h, std::string_view k,
                            std::string_view v) {
  h = mix64(h ^ hash_bytes(k.data(), k.size(), 0x6b65u));
  h = mix64(h ^ hash_bytes(v.data(), v.size(), 0x76616cu));
  return h;
}

}  // namespace

BaselineIndex::BaselineIndex(const Config& cfg)
    : EngineBase(cfg), store_(cfg.hash_seed) {}

Status BaselineIndex::txn_begin(Txn* t, uint32_t flags) {
  if (!t || t->state == TxnStatus::Active) return Status::Invalid;
  t->reset();
  t->flags = flags;
  t->state = TxnStatus::Active;
  ctrs_.add(Ctr::txn_begun);
  return Status::Ok;
}

Status BaselineIndex::lookup(Txn* t, std::string_view key, std::string* out) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!key_valid(key)) return Status::Invalid;
  ctrs_.add(Ctr::lookups);
  if (store_.get(key, out)) {
    ctrs_.add(Ctr::lookup_hits);
    return Status::Ok;
  }
  return Status::NotFound;
}

Status BaselineIndex::insert(Txn* t, std::string_view key,
                             std::string_view value) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!key_valid(key)) return Status::Invalid;
  if (t->wrote_key(key)) return finalize_abort(t, Status::Fault);
  ensure_lock(t, /*exclusive=*/true);
  if (!store_.insert(key, Value(value)))
    return finalize_abort(t, Status::AbortKeyExists);
  t->update_keys.emplace_back(key);
  t->writes.push_back(Txn::BWrite{OpKind::Insert, Key(key), {}});
  ctrs_.add(Ctr::inserts_ok);
  return Status::Ok;
}

Status BaselineIndex::erase(Txn* t, std::string_view key) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!key_valid(key)) return Status::Invalid;
  if (t->wrote_key(key)) return finalize_abort(t, Status::Fault);
  ensure_lock(t, /*exclusive=*/true);
  Value displaced;
  if (!store_.remove(key, &displaced))
    return finalize_abort(t, Status::AbortKeyNotFound);
  t->update_keys.emplace_back(key);
  t->writes.push_back(Txn::BWrite{OpKind::Delete, Key(key), std::move(displaced)});
  ctrs_.add(Ctr::deletes_ok);
  return Status::Ok;
}

Status BaselineIndex::scan(Txn* t, std::string_view begin, std::string_view end,
                           size_t limit, ScanSink sink, void* ctx) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!key_valid(begin) || !key_valid(end) || key_compare(begin, end) > 0)
    return Status::Invalid;
  ensure_lock(t, /*exclusive=*/false);
  ctrs_.add(Ctr::tree_reads);

  Txn::BScan rec;
  rec.begin = Key(begin);
  rec.limit = limit;
  size_t emitted = 0;
  Key last_emitted;
  bool sink_open = true;

  if (cfg_.full_predicate_validation) {
    // Fingerprint the entire requested range regardless of the result limit,
    // so commit-time validation covers everything the predicate spans.
    store_.scan(begin, end, 0, [&](std::string_view k, const Value& v) {
      rec.digest = digest_step(rec.digest, k, v);
      rec.count++;
      if (sink_open && (limit == 0 || emitted < limit)) {
        emitted++;
        if (sink && !sink(ctx, k, v)) sink_open = false;
      }
      return true;
    });
    rec.end_used = Key(end);
  } else {
    // Fingerprint exactly what was handed out; validation later replays the
    // range only up to the last key this scan actually read.
    store_.scan(begin, end, limit, [&](std::string_view k, const Value& v) {
      rec.digest = digest_step(rec.digest, k, v);
      rec.count++;
      emitted++;
      last_emitted = Key(k);
      if (sink && !sink(ctx, k, v)) {
        sink_open = false;
        return false;
      }
      return true;
    });
    bool truncated = !sink_open || (limit != 0 && emitted == limit);
    rec.end_used = (emitted > 0 && truncated) ? last_emitted : Key(end);
  }

  t->scans.push_back(std::move(rec));
  ctrs_.add(Ctr::scans_ok);
  ctrs_.add(Ctr::scan_keys_returned, emitted);
  return Status::Ok;
}

Status BaselineIndex::commit(Txn* t) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  if (!cfg_.debug_disable_rescan_validation) {
    for (const Txn::BScan& s : t->scans) {
      ctrs_.add(Ctr::rescans);
      ctrs_.add(Ctr::tree_reads);
      uint64_t digest = 0;
      size_t count = 0;
      // This re-walks the range the scan just read, so the lines are still
      // resident and prefetch hints would only add overhead.
      store_.scan(
          s.begin, s.end_used, 0,
          [&](std::string_view k, const Value& v) {
            digest = digest_step(digest, k, v);
            count++;
            return true;
          },
          /*warm=*/false);
      if (digest != s.digest || count != s.count)
        return finalize_abort(t, Status::AbortPhantom);
    }
  }
  t->state = TxnStatus::Committed;
  ctrs_.add(Ctr::txn_committed);
  release_lock(t);
  thread_local uint32_t fin = 0;
  if ((++fin & 0xff) == 0) EpochDomain::global().flush();
  return Status::Ok;
}

Status BaselineIndex::abort(Txn* t) {
  if (!t || t->state != TxnStatus::Active) return Status::Invalid;
  rollback_writes(t);
  t->state = TxnStatus::Aborted;
  ctrs_.add(Ctr::txn_aborted);
  release_lock(t);
  return Status::Ok;
}

Status BaselineIndex::finalize_abort(Txn* t, Status reason) {
  rollback_writes(t);
  t->state = TxnStatus::Aborted;
  ctrs_.add(Ctr::txn_aborted);
  switch (reason) {
    case Status::AbortPhantom: ctrs_.add(Ctr::aborts_phantom); break;
    case Status::AbortStaleRead: ctrs_.add(Ctr::aborts_stale_read); break;
    case Status::AbortKeyExists: ctrs_.add(Ctr::aborts_key_exists); break;
    case Status::AbortKeyNotFound: ctrs_.add(Ctr::aborts_key_not_found); break;
    default: break;
  }
  release_lock(t);
  return reason;
}

void BaselineIndex::rollback_writes(Txn* t) {
  for (auto it = t->writes.rbegin(); it != t->writes.rend(); ++it) {
    bool ok = (it->kind == OpKind::Insert)
                  ? store_.remove(it->key)
                  : store_.insert(it->key, it->displaced);
    // With serialized writers this cannot fail; without them the eager
    // write-through has no sound undo, which is exactly what this engine's
    // concurrent-writer mode exists to paper over.
    if (!ok) ctrs_.add(Ctr::invariant_violations);
  }
  t->writes.clear();
}

void BaselineIndex::txn_cleanup(Txn* t) {
  if (!t) return;
  if (t->state == TxnStatus::Active) abort(t);
}

Status BaselineIndex::sync_pass() {
  EpochDomain::global().flush();
  return Status::Ok;
}

void BaselineIndex::ensure_lock(Txn* t, bool exclusive) {
  if (!(t->flags & kTxnAtomicWrites)) return;
  if (exclusive) {
    if (t->lock == Txn::Lock::Exclusive) return;
    if (t->lock == Txn::Lock::Shared) atomic_mu_.unlock_shared();
    atomic_mu_.lock();
    t->lock = Txn::Lock::Exclusive;
  } else {
    if (t->lock != Txn::Lock::None) return;
    atomic_mu_.lock_shared();
    t->lock = Txn::Lock::Shared;
  }
}

void BaselineIndex::release_lock(Txn* t) {
  if (t->lock == Txn::Lock::Exclusive) atomic_mu_.unlock();
  else if (t->lock == Txn::Lock::Shared) atomic_mu_.unlock_shared();
  t->lock = Txn::Lock::None;
}

void BaselineIndex::stats(StatsSnapshot* out) {
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
  out->tree_reads = ctrs_.total(Ctr::tree_reads);
  out->rescans = ctrs_.total(Ctr::rescans);
  out->invariant_violations = ctrs_.total(Ctr::invariant_violations);
}

}  // namespace griffin
