#pragma once

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "griffin/lock_sets.hpp"
#include "griffin/point_store.hpp"
#include "griffin/range_store.hpp"
#include "griffin/runtime.hpp"

namespace griffin {

// ---------------------------------------------------------------------------
// Drains the two lock lists. For every finished update entry it either
// applies the write to the ordered key index (committed) or undoes the hash
// mutation (aborted), strictly before unlinking the entry; finished scan
// entries are simply collected. Active entries are never touched - that is
// what keeps in-flight conflict checks sound.
//
// A single mutex serializes passes; the background thread and cooperative
// callers (try_pass) share it.
// ---------------------------------------------------------------------------

class SyncManager {
 public:
  SyncManager(PointStore& ps, RangeStore& rs, UpdateLockList& lu,
              ScanLockList& lp, Counters& ctrs, bool profile)
      : ps_(ps), rs_(rs), lu_(lu), lp_(lp), ctrs_(ctrs), profile_(profile) {}
  ~SyncManager() { stop(); }

  void pass();
  // Non-blocking variant for worker threads volunteering a pass; returns
  // false when another pass is already running or there is nothing to do.
  bool try_pass();

  void start(uint64_t interval_us);
  void stop();
  bool running() const { return running_.load(std::memory_order_acquire); }

  bool lists_empty() const { return lu_.size() == 0 && lp_.size() == 0; }

 private:
  void sweep_locked();
  // True once the entry's effect is settled against both stores.
  bool handle_update_entry(UpdateEntry& e);
  void thread_main(uint64_t interval_us);

  PointStore& ps_;
  RangeStore& rs_;
  UpdateLockList& lu_;
  ScanLockList& lp_;
  Counters& ctrs_;
  bool profile_;

  std::mutex pass_mu_;
  std::mutex run_mu_;
  std::condition_variable run_cv_;
  std::atomic<bool> running_{false};
  bool stop_requested_ = false;
  std::thread thread_;
};

}  // namespace griffin
