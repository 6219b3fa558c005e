#pragma once

#include <atomic>
#include <cstdint>
#include <cstring>

namespace griffin {

// ---------------------------------------------------------------------------
// Thread slots: every thread touching an engine gets a stable small id, used
// for epoch announcement and sharded counters. Released on thread exit.
// ---------------------------------------------------------------------------

struct ThreadSlots {
  static constexpr int kMaxThreads = 256;
  // Stable id of the calling thread; registers on first use.
  static int self();
  // One past the largest id ever claimed; lets epoch scans skip the (mostly
  // idle) tail of the slot table.
  static int watermark();
};

// ---------------------------------------------------------------------------
// Epoch-based deferred reclamation. Unlinked nodes (lock entries, hash
// records, skip list nodes) are retired into the calling thread's bin and
// freed only once every thread that could have observed them has left its
// read-side critical section.
//
// Protocol (classic three-phase EBR): readers pin the current epoch in their
// slot; the reclaimer advances the global epoch only when every pinned slot
// matches it; items retired in epoch e are freed once the global epoch
// reaches e+2.
// ---------------------------------------------------------------------------

class EpochDomain {
 public:
  static EpochDomain& global();

  class Guard {
   public:
    Guard();
    ~Guard();
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;

   private:
    bool outer_;
  };

  using Deleter = void (*)(void*);

  void retire(void* p, Deleter d);

  template <class T>
  void retire(T* p) {
    retire(p, [](void* q) { delete static_cast<T*>(q); });
  }

  // Best-effort: advance the epoch and free whatever became safe. Called from
  // sweep passes and teardown paths; never blocks on stalled readers.
  void flush();

  uint64_t epoch() const { return epoch_.load(std::memory_order_acquire); }

 private:
  friend class Guard;

  struct alignas(64) Slot {
    // 0 when quiescent; otherwise (epoch << 1) | 1.
    std::atomic<uint64_t> pin{0};
  };

  bool try_advance();
  void reap(int slot_id);

  std::atomic<uint64_t> epoch_{2};
  Slot slots_[ThreadSlots::kMaxThreads];
};

// ---------------------------------------------------------------------------
// Sharded event counters: one cache-line-isolated row per thread slot, summed
// on read. Increment is a relaxed add on thread-private memory.
// ---------------------------------------------------------------------------

enum class Ctr : int {
  txn_begun,
  txn_committed,
  txn_aborted,
  aborts_phantom,
  aborts_stale_read,
  aborts_key_exists,
  aborts_key_not_found,
  lookups,
  lookup_hits,
  inserts_ok,
  deletes_ok,
  scans_ok,
  scan_keys_returned,
  lu_appends,
  lp_appends,
  lu_checks,          // update-lock list traversals made by operations
  lp_checks,          // scan-lock list traversals made by operations
  lu_nodes_visited,
  lp_nodes_visited,
  tree_reads,         // ordered-store locates done by operations (scans/rescans)
  sync_passes,
  sync_applied,
  sync_rolled_back,
  sync_lp_collected,
  rescans,            // baseline commit-time validation rescans
  invariant_violations,
  ns_update_log,      // profile: append + sweep + ordered-store apply
  ns_point_store,     // profile: hash-table mutation
  ns_scan_lock_check, // profile: scan-lock conflict check in updates
  kCount,
};

class Counters {
 public:
  void add(Ctr c, uint64_t v = 1) {
    rows_[ThreadSlots::self()].v[static_cast<int>(c)].fetch_add(
        v, std::memory_order_relaxed);
  }
  uint64_t total(Ctr c) const {
    uint64_t s = 0;
    for (const Row& r : rows_)
      s += r.v[static_cast<int>(c)].load(std::memory_order_relaxed);
    return s;
  }

 private:
  struct alignas(64) Row {
    std::atomic<uint64_t> v[static_cast<int>(Ctr::kCount)] = {};
  };
  Row rows_[ThreadSlots::kMaxThreads];
};

// ---------------------------------------------------------------------------
// Seeded 64-bit byte hash (murmur-style finalizer over 8-byte chunks).
// ---------------------------------------------------------------------------

inline uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline uint64_t hash_bytes(const void* data, size_t n, uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed ^ (0x9e3779b97f4a7c15ULL * (n + 1));
  while (n >= 8) {
    uint64_t k;
    std::memcpy(&k, p, 8);
    h = mix64(h ^ k) * 0x2545f4914f6cdd1dULL;
    p += 8;
    n -= 8;
  }
  uint64_t tail = 0;
  for (size_t i = 0; i < n; i++) tail |= uint64_t(p[i]) << (8 * i);
  return mix64(h ^ tail);
}

}  // namespace griffin
