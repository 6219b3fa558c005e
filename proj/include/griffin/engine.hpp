#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "griffin/lock_sets.hpp"
#include "griffin/types.hpp"

namespace griffin {

enum class EngineKind : int { Griffin = 0, Baseline = 1 };

struct Config {
  EngineKind engine = EngineKind::Griffin;
  uint64_t capacity_slots = 1ull << 22;  // hash slots; rounded up to 2^k
  double max_load_factor = 0.7;
  uint64_t sync_interval_us = 1000;
  bool sync_autostart = true;
  // When nonzero, every Nth finished txn volunteers one synchronization pass
  // instead of relying purely on the background thread. Useful when worker
  // threads oversubscribe the cores and a dedicated thread would starve.
  uint32_t coop_sync_ops = 0;
  // Baseline only: commit re-validates the full requested range of every
  // scan instead of just the prefix the scan actually returned.
  bool full_predicate_validation = false;
  // Test hooks: selectively disable one side of the conflict protocol.
  bool debug_disable_scan_update_check = false;
  bool debug_disable_update_scan_check = false;
  bool debug_disable_rescan_validation = false;
  bool profile_ops = false;
  uint64_t hash_seed = 0x5eedf00dULL;

  Status validate() const;
};

struct StatsSnapshot {
  uint64_t txns_begun = 0;
  uint64_t txns_committed = 0;
  uint64_t txns_aborted = 0;
  uint64_t aborts_phantom = 0;
  uint64_t aborts_stale_read = 0;
  uint64_t aborts_key_exists = 0;
  uint64_t aborts_key_not_found = 0;
  uint64_t lookups = 0;
  uint64_t lookup_hits = 0;
  uint64_t inserts_ok = 0;
  uint64_t deletes_ok = 0;
  uint64_t scans_ok = 0;
  uint64_t scan_keys_returned = 0;
  uint64_t update_lock_appends = 0;
  uint64_t scan_lock_appends = 0;
  uint64_t update_lock_checks = 0;
  uint64_t scan_lock_checks = 0;
  uint64_t update_lock_nodes_visited = 0;
  uint64_t scan_lock_nodes_visited = 0;
  uint64_t tree_reads = 0;
  uint64_t sync_passes = 0;
  uint64_t sync_applied = 0;
  uint64_t sync_rolled_back = 0;
  uint64_t sync_scan_locks_collected = 0;
  uint64_t rescans = 0;
  uint64_t invariant_violations = 0;
  int64_t update_locks_len = 0;  // live entries right now
  int64_t scan_locks_len = 0;
  uint64_t ns_update_log = 0;
  uint64_t ns_point_store = 0;
  uint64_t ns_scan_lock_check = 0;
};

// Flag for txn_begin: serialize this txn's writes against other flagged txns
// (writers exclusive, scanners shared). Baseline only; a correctness crutch
// for harnesses that need multi-write txns to appear atomic despite the
// baseline's eager write-through.
inline constexpr uint32_t kTxnAtomicWrites = 1u;

// Transaction handle shared by both engines; the facade owns pooling.
struct Txn {
  TxnStatus state = TxnStatus::Aborted;  // inert until txn_begin
  uint32_t flags = 0;
  TxnTag* tag = nullptr;  // griffin: shared descriptor for lock entries

  std::vector<Key> update_keys;  // one write per key per txn

  struct BWrite {
    OpKind kind;
    Key key;
    Value displaced;  // for rolling back an eager delete
  };
  struct BScan {
    Key begin;
    Key end_used;  // bound the validating rescan replays
    size_t limit = 0;
    uint64_t digest = 0;
    size_t count = 0;
  };
  std::vector<BWrite> writes;  // baseline: eager writes to undo on abort
  std::vector<BScan> scans;    // baseline: predicates to re-validate
  enum class Lock : uint8_t { None, Shared, Exclusive } lock = Lock::None;

  bool wrote_key(std::string_view k) const {
    for (const Key& u : update_keys)
      if (u == k) return true;
    return false;
  }

  void reset() {
    state = TxnStatus::Aborted;
    flags = 0;
    tag = nullptr;
    update_keys.clear();
    writes.clear();
    scans.clear();
    lock = Lock::None;
  }
};

// Scan results stream through a plain callback; returning false stops the
// scan early without failing it.
using ScanSink = bool (*)(void* ctx, std::string_view key,
                          std::string_view value);

class EngineBase {
 public:
  explicit EngineBase(const Config& cfg) : cfg_(cfg) {}
  virtual ~EngineBase() = default;

  virtual Status txn_begin(Txn* t, uint32_t flags) = 0;
  virtual Status lookup(Txn* t, std::string_view key, std::string* out) = 0;
  virtual Status insert(Txn* t, std::string_view key,
                        std::string_view value) = 0;
  virtual Status erase(Txn* t, std::string_view key) = 0;
  virtual Status scan(Txn* t, std::string_view begin, std::string_view end,
                      size_t limit, ScanSink sink, void* ctx) = 0;
  virtual Status commit(Txn* t) = 0;
  virtual Status abort(Txn* t) = 0;
  // Called when a handle is destroyed or recycled; must be safe on any state.
  virtual void txn_cleanup(Txn* t) = 0;

  virtual Status sync_start() = 0;
  virtual Status sync_stop() = 0;
  virtual Status sync_pass() = 0;

  virtual void stats(StatsSnapshot* out) = 0;

  const Config& config() const { return cfg_; }

 protected:
  Config cfg_;
};

std::unique_ptr<EngineBase> make_engine(const Config& cfg);

}  // namespace griffin
