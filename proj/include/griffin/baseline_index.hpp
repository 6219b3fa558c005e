#pragma once

#include <shared_mutex>

#include "griffin/engine.hpp"
#include "griffin/runtime.hpp"
#include "griffin/skiplist.hpp"

namespace griffin {

// ---------------------------------------------------------------------------
// Validating single-store engine: one ordered map holds keys and values,
// writes go in eagerly, and commit re-reads every range the transaction
// scanned and aborts if anything inside it changed. Aborts undo their eager
// writes in reverse. This is the classic rescan discipline the hybrid engine
// is measured against.
// ---------------------------------------------------------------------------

class BaselineIndex final : public EngineBase {
 public:
  explicit BaselineIndex(const Config& cfg);
  ~BaselineIndex() override = default;

  Status txn_begin(Txn* t, uint32_t flags) override;
  Status lookup(Txn* t, std::string_view key, std::string* out) override;
  Status insert(Txn* t, std::string_view key, std::string_view value) override;
  Status erase(Txn* t, std::string_view key) override;
  Status scan(Txn* t, std::string_view begin, std::string_view end,
              size_t limit, ScanSink sink, void* ctx) override;
  Status commit(Txn* t) override;
  Status abort(Txn* t) override;
  void txn_cleanup(Txn* t) override;

  Status sync_start() override { return Status::Ok; }  // nothing to sync
  Status sync_stop() override { return Status::Ok; }
  Status sync_pass() override;

  void stats(StatsSnapshot* out) override;

  SkipList<Value>& store() { return store_; }
  Counters& counters() { return ctrs_; }

 private:
  void ensure_lock(Txn* t, bool exclusive);
  void release_lock(Txn* t);
  void rollback_writes(Txn* t);
  Status finalize_abort(Txn* t, Status reason);

  Counters ctrs_;
  SkipList<Value> store_;
  // Only transactions begun with kTxnAtomicWrites touch this.
  std::shared_mutex atomic_mu_;
};

}  // namespace griffin
