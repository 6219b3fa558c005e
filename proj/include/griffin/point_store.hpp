#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <string>
#include <string_view>

#include "griffin/lock_sets.hpp"
#include "griffin/runtime.hpp"
#include "griffin/types.hpp"

namespace griffin {

// ---------------------------------------------------------------------------
// Point store record. Immutable once published: every state change installs a
// fresh record via CAS on the slot and retires the old one through the epoch
// domain, so readers never see a half-written record.
//
// States:
//   Live - key present, value follows the key bytes.
//   Tomb - key logically deleted by `owner`, but the displaced value is kept
//          so that range reads racing an unfinished delete still get the last
//          durable value.
//   Slim - fully dead placeholder; keeps the slot claimed so probe chains for
//          other keys never break (slots are never compacted).
// ---------------------------------------------------------------------------

struct Rec {
  enum class St : uint8_t { Live, Tomb, Slim };

  St state;
  TxnTag* owner;  // holds a reference, released when the record is reclaimed
  uint32_t klen;
  uint32_t vlen;
  char data[];  // key bytes then value bytes

  std::string_view key() const { return {data, klen}; }
  std::string_view value() const { return {data + klen, vlen}; }
};

Rec* rec_make(Rec::St st, TxnTag* owner, std::string_view key,
              std::string_view value);
void rec_free(Rec* r);    // immediate: unref owner, release memory
void rec_retire(Rec* r);  // deferred through the epoch domain

// Equality probe for short keys. Probing needs equality only, and the libc
// memcmp's width dispatch costs more than the comparison itself at typical
// key sizes.
inline bool rec_key_eq(const Rec* r, std::string_view key) {
  if (r->klen != key.size()) return false;
  const char* a = r->data;
  const char* b = key.data();
  size_t n = key.size();
  while (n >= 8) {
    uint64_t x, y;
    std::memcpy(&x, a, 8);
    std::memcpy(&y, b, 8);
    if (x != y) return false;
    a += 8;
    b += 8;
    n -= 8;
  }
  for (size_t i = 0; i < n; i++)
    if (a[i] != b[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Fixed-capacity open-addressing hash table over atomic record pointers.
// Linear probing, one slot per distinct key ever inserted (dead keys leave a
// Slim placeholder, so a probe can stop at the first empty slot). All point
// operations are lock-free; per-key linearization happens on the slot CAS.
// ---------------------------------------------------------------------------

class PointStore {
 public:
  // slots is rounded up to a power of two; the load gate applies to claimed
  // slots (live + dead placeholders).
  PointStore(uint64_t slots, double max_load_factor, uint64_t hash_seed);
  ~PointStore();
  PointStore(const PointStore&) = delete;
  PointStore& operator=(const PointStore&) = delete;

  struct MutRes {
    Status st;
    Rec* rec;  // record installed on success, nullptr otherwise
  };

  // Ok | AbortKeyExists | Capacity. A key whose slot holds a Tomb still
  // counts as existing: the pending delete has not been applied downstream
  // yet, and re-admitting the key here would tangle that pipeline. Callers
  // retry once the tombstone is purged.
  MutRes insert(std::string_view key, std::string_view value, TxnTag* owner);

  // Ok | AbortKeyNotFound. Only a Live record whose owner committed can be
  // deleted; a Live record with an unfinished owner is treated as absent so
  // that its rollback can never collide with a tombstone from someone else.
  MutRes erase(std::string_view key, TxnTag* owner);

  // Current-state read: Live yields the value, anything else is NotFound.
  Status lookup(std::string_view key, std::string* out) const;

  // Range-read fetch: Live and Tomb both yield a value (Tomb: the displaced
  // one). Slim or absent means the caller's protocol was violated -> Fault.
  Status fetch_for_scan(std::string_view key, std::string* out) const;

  // What a finished transaction's key state looks like from outside:
  //   Present   - Live record whose owner committed.
  //   Absent    - no record, a dead placeholder, or a committed tombstone
  //               (the delete is durable even if its slot wasn't purged yet).
  //   Unsettled - held by an owner whose outcome has not been acted on; the
  //               owner's own log entry is still pending and will resolve it.
  // On Present, *value (if given) receives the record's value.
  enum class SettledView : uint8_t { Present, Absent, Unsettled };
  SettledView settled_view(std::string_view key,
                           std::string* value = nullptr) const;

  // Maintenance hooks used while applying or rolling back a finished txn.
  // All are pointer-matched: they act only if the slot still holds exactly
  // the record the caller installed, and report whether they did.
  bool still_current(std::string_view key, const Rec* rec) const;
  bool purge(std::string_view key, Rec* expected_tomb);          // -> Slim
  bool rollback_insert(std::string_view key, Rec* expected_live);  // -> Slim
  bool rollback_delete(std::string_view key, Rec* expected_tomb);  // -> Live

  uint64_t claimed_slots() const {
    return claimed_.load(std::memory_order_acquire);
  }
  uint64_t capacity_slots() const { return nslots_; }
  uint64_t max_entries() const { return max_entries_; }

  // Debug/verification: walk every slot and report Live keys.
  template <class Fn>
  void for_each_live(Fn&& fn) const {
    EpochDomain::Guard g;
    for (uint64_t i = 0; i < nslots_; i++) {
      Rec* r = slots_[i].load(std::memory_order_acquire);
      if (r && r->state == Rec::St::Live) fn(r->key(), r->value());
    }
  }

 private:
  uint64_t home_slot(std::string_view key) const {
    return hash_bytes(key.data(), key.size(), seed_) & mask_;
  }

  // Probe to the slot holding `key`, or to the first empty slot. Returns the
  // slot index; *out is the record there (nullptr for empty).
  uint64_t locate(std::string_view key, Rec** out) const;
  uint64_t locate_at(uint64_t start, std::string_view key, Rec** out) const;

  uint64_t nslots_;
  uint64_t mask_;
  uint64_t max_entries_;
  uint64_t seed_;
  std::atomic<uint64_t> claimed_{0};
  std::atomic<Rec*>* slots_;
};

}  // namespace griffin
