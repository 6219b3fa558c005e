#include "griffin/sync_manager.hpp"

#include <chrono>

#if defined(__linux__)
#include <sys/prctl.h>
#endif

namespace griffin {

namespace {
inline uint64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}
}  // namespace

void SyncManager::pass() {
  {
    std::lock_guard<std::mutex> lk(pass_mu_);
    sweep_locked();
  }
  EpochDomain::global().flush();
}

bool SyncManager::try_pass() {
  if (lists_empty()) return false;
  if (!pass_mu_.try_lock()) return false;
  sweep_locked();
  pass_mu_.unlock();
  EpochDomain::global().flush();
  return true;
}

void SyncManager::sweep_locked() {
  ctrs_.add(Ctr::sync_passes);
  uint64_t t0 = profile_ ? now_ns() : 0;

  // Oldest entries first; the list is the log. Entries of still-active txns
  // stay where they are so conflict checks keep seeing them.
  lu_.sweep([&](UpdateEntry& e) {
    TxnStatus st = tag_status(e.tag);
    if (st == TxnStatus::Active) return false;
    return handle_update_entry(e);
  });

  lp_.sweep([&](ScanEntry& e) {
    if (tag_status(e.tag) == TxnStatus::Active) return false;
    ctrs_.add(Ctr::sync_lp_collected);
    return true;
  });

  if (profile_) ctrs_.add(Ctr::ns_update_log, now_ns() - t0);
}

bool SyncManager::handle_update_entry(UpdateEntry& e) {
  TxnStatus st = tag_status(e.tag);
  std::string_view key = e.key.view();
  if (st == TxnStatus::Committed) {
    if (!e.applied) {
      // A committed txn can only have fully applied writes; the op either
      // mutated the hash table or aborted the txn on the spot.
      ctrs_.add(Ctr::invariant_violations);
      return true;
    }
    if (e.kind == OpKind::Delete) {
      // A committed tombstone can only leave the slot through this purge:
      // inserts and deletes refuse tombstoned keys and rollbacks are
      // pointer-matched to their own records, so the purge must land.
      if (!ps_.purge(key, e.rec)) ctrs_.add(Ctr::invariant_violations);
    }
    ctrs_.add(Ctr::sync_applied);
  } else if (st == TxnStatus::Aborted) {
    if (e.applied) {
      bool ok = (e.kind == OpKind::Insert) ? ps_.rollback_insert(key, e.rec)
                                           : ps_.rollback_delete(key, e.rec);
      // Nothing else may touch a record whose owner never committed, so the
      // rollback target has to still be in place.
      if (!ok) ctrs_.add(Ctr::invariant_violations);
      ctrs_.add(Ctr::sync_rolled_back);
      // fall through to reconcile: an undone delete reinstates the key, and
      // the entry that put it in the ordered index may already be gone.
    } else {
      // Never touched the hash table, so it owes the ordered index nothing.
      return true;
    }
  } else {
    ctrs_.add(Ctr::invariant_violations);  // unlinking active entries is a bug
    return false;
  }

  // Reconcile the ordered index from the slot's settled state rather than
  // from this entry: a later write may have replaced e.rec, and deciding off
  // the entry would drop its effect on the floor (e.g. a committed insert
  // superseded by a delete that later aborts and restores the key). A key
  // left unsettled is owned by a transaction whose own entry is still in
  // this list and repeats this step once the outcome is known. This runs
  // before the entry is unlinked, so a scan that no longer sees the entry
  // already sees the reconciled index.
  std::string value;
  switch (ps_.settled_view(key, &value)) {
    case PointStore::SettledView::Present:
      rs_.insert(key, value);
      break;
    case PointStore::SettledView::Absent:
      rs_.remove(key);
      break;
    case PointStore::SettledView::Unsettled:
      break;
  }
  return true;
}

void SyncManager::start(uint64_t interval_us) {
  std::lock_guard<std::mutex> lk(run_mu_);
  if (running_.load(std::memory_order_acquire)) return;
  stop_requested_ = false;
  running_.store(true, std::memory_order_release);
  thread_ = std::thread([this, interval_us] { thread_main(interval_us); });
}

void SyncManager::stop() {
  {
    std::lock_guard<std::mutex> lk(run_mu_);
    if (!running_.load(std::memory_order_acquire)) return;
    stop_requested_ = true;
    run_cv_.notify_all();
  }
  thread_.join();
  running_.store(false, std::memory_order_release);
}

void SyncManager::thread_main(uint64_t interval_us) {
#if defined(__linux__)
  // Default timer slack (50us) would flatten sub-millisecond intervals.
  prctl(PR_SET_TIMERSLACK, 1000UL);
#endif
  for (;;) {
    {
      std::unique_lock<std::mutex> lk(run_mu_);
      run_cv_.wait_for(lk, std::chrono::microseconds(interval_us),
                       [&] { return stop_requested_; });
      if (stop_requested_) return;
    }
    pass();
  }
}

}  // namespace griffin
