#pragma once

#include <atomic>
#include <memory>

#include "griffin/engine.hpp"
#include "griffin/lock_sets.hpp"
#include "griffin/point_store.hpp"
#include "griffin/range_store.hpp"
#include "griffin/runtime.hpp"
#include "griffin/sync_manager.hpp"

namespace griffin {

// ---------------------------------------------------------------------------
// Hybrid transactional index. Point reads and writes go straight to the hash
// table and stay cheap; range reads run over the lazily synchronized ordered
// key index and fetch values from the hash table. Updates and scans guard
// each other through the two lock lists: each operation first publishes its
// own entry, then checks the opposite list, and aborts on any overlap
// regardless of the other owner's state. The publish/check pair is fenced so
// that of any two racing operations at least one sees the other.
// ---------------------------------------------------------------------------

class GriffinIndex final : public EngineBase {
 public:
  explicit GriffinIndex(const Config& cfg);
  ~GriffinIndex() override;

  Status txn_begin(Txn* t, uint32_t flags) override;
  Status lookup(Txn* t, std::string_view key, std::string* out) override;
  Status insert(Txn* t, std::string_view key, std::string_view value) override;
  Status erase(Txn* t, std::string_view key) override;
  Status scan(Txn* t, std::string_view begin, std::string_view end,
              size_t limit, ScanSink sink, void* ctx) override;
  Status commit(Txn* t) override;
  Status abort(Txn* t) override;
  void txn_cleanup(Txn* t) override;

  Status sync_start() override;
  Status sync_stop() override;
  Status sync_pass() override;

  void stats(StatsSnapshot* out) override;

  // White-box accessors for tests and verification harnesses.
  PointStore& point_store() { return ps_; }
  RangeStore& range_store() { return rs_; }
  UpdateLockList& update_locks() { return lu_; }
  ScanLockList& scan_locks() { return lp_; }
  Counters& counters() { return ctrs_; }

 private:
  // Both kinds of update share the publish -> fence -> check -> mutate path.
  Status update_common(Txn* t, OpKind kind, std::string_view key,
                       std::string_view value);
  Status finalize_abort(Txn* t, Status reason);
  void after_finalize(Txn* t);

  Counters ctrs_;
  PointStore ps_;
  RangeStore rs_;
  UpdateLockList lu_;
  ScanLockList lp_;
  SyncManager sync_;
  std::atomic<uint64_t> finalize_seq_{0};
};

}  // namespace griffin
