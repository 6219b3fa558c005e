#pragma once

#include <atomic>
#include <cstdint>
#include <string_view>

#include "griffin/runtime.hpp"
#include "griffin/types.hpp"

namespace griffin {

struct Rec;  // point store record, point_store.hpp

// ---------------------------------------------------------------------------
// Shared transaction descriptor. Lock entries and hash records keep pointing
// at it long after the owning handle has been recycled, so it is reference
// counted and reclaimed through the epoch domain (a traverser inside a guard
// may still read the status of a node that was just unlinked).
// ---------------------------------------------------------------------------

struct TxnTag {
  std::atomic<TxnStatus> status{TxnStatus::Active};
  std::atomic<uint32_t> refs{1};  // creator's reference

  void ref() { refs.fetch_add(1, std::memory_order_relaxed); }

  static void unref(TxnTag* t) {
    if (t && t->refs.fetch_sub(1, std::memory_order_acq_rel) == 1)
      EpochDomain::global().retire(t);
  }
};

inline TxnStatus tag_status(const TxnTag* t) {
  return t->status.load(std::memory_order_acquire);
}

// Permanent committed descriptor used as the owner of records that carry
// already-durable state (rollback restorations, purge placeholders).
TxnTag* stable_tag();

// ---------------------------------------------------------------------------
// Lock list entries. One update entry per point write, one scan entry per
// range read. Entries with tag == nullptr are inert structural markers pushed
// by the sweeper so that the physically last node can be unlinked without
// racing a concurrent tail append.
// ---------------------------------------------------------------------------

struct UpdateEntry {
  std::atomic<UpdateEntry*> next{nullptr};
  TxnTag* tag = nullptr;
  OpKind kind = OpKind::Insert;
  // Set by the owner once the hash-table mutation landed; read by the sweeper
  // only after it observed a terminal status, which orders these fields.
  bool applied = false;
  Rec* rec = nullptr;
  KeyBuf key;

  UpdateEntry() = default;  // marker

  static UpdateEntry* make(TxnTag* t, OpKind k, std::string_view kv) {
    auto* e = new UpdateEntry();
    t->ref();
    e->tag = t;
    e->kind = k;
    e->key.assign(kv);
    return e;
  }
  static UpdateEntry* make_marker() { return new UpdateEntry(); }
  bool is_marker() const { return tag == nullptr; }
};

struct ScanEntry {
  std::atomic<ScanEntry*> next{nullptr};
  TxnTag* tag = nullptr;
  KeyBuf begin;
  KeyBuf end0;  // requested upper bound
  KeyBuf end1;  // tightened upper bound, filled at most once
  std::atomic<const KeyBuf*> end{&end0};

  ScanEntry() = default;  // marker

  static ScanEntry* make(TxnTag* t, std::string_view b, std::string_view e) {
    auto* s = new ScanEntry();
    t->ref();
    s->tag = t;
    s->begin.assign(b);
    s->end0.assign(e);
    return s;
  }
  static ScanEntry* make_marker() { return new ScanEntry(); }
  bool is_marker() const { return tag == nullptr; }

  // Shrink the protected range to the last key actually returned. Called once
  // by the owning scan when the result was cut off by its limit; end1 is
  // fully written before the release store publishes it.
  void narrow(std::string_view last_key) {
    end1.assign(last_key);
    end.store(&end1, std::memory_order_release);
  }
};

struct ConflictHit {
  bool found = false;
  TxnStatus status = TxnStatus::Active;  // status of the conflicting owner
  uint64_t visited = 0;                  // non-marker entries examined
};

// ---------------------------------------------------------------------------
// Append-mostly lock list: lock-free tail append (CAS on last .next with a
// lagging tail hint), lock-free traversal, and a single-threaded sweeper that
// unlinks interior nodes. Unlinked nodes go through the epoch domain because
// traversers may still be parked on them.
// ---------------------------------------------------------------------------

template <class E>
class LockList {
 public:
  LockList() = default;
  ~LockList() {
    E* n = head_.next.load(std::memory_order_relaxed);
    while (n) {
      E* nx = n->next.load(std::memory_order_relaxed);
      TxnTag::unref(n->tag);
      delete n;
      n = nx;
    }
  }
  LockList(const LockList&) = delete;
  LockList& operator=(const LockList&) = delete;

  void append(E* e) {
    EpochDomain::Guard g;
    E* hint = tail_.load(std::memory_order_acquire);
    E* t = hint;
    for (;;) {
      E* nx = t->next.load(std::memory_order_acquire);
      if (nx) {
        t = nx;
        continue;
      }
      E* expect = nullptr;
      if (t->next.compare_exchange_weak(expect, e, std::memory_order_acq_rel,
                                        std::memory_order_acquire))
        break;
      if (expect) t = expect;
    }
    // Advance the hint only from the value we read: an unconditional store
    // could resurrect a pointer the sweeper already repaired away.
    tail_.compare_exchange_strong(hint, e, std::memory_order_acq_rel);
    if (!e->is_marker()) real_count_.fetch_add(1, std::memory_order_relaxed);
  }

  // Single consumer. fn(entry) -> true means the entry is fully handled and
  // may be unlinked; markers are structural and removed whenever they are not
  // the physically last node.
  template <class Fn>
  uint64_t sweep(Fn&& fn) {
    EpochDomain::Guard g;
    uint64_t removed = 0;
    E* prev = &head_;
    E* n = prev->next.load(std::memory_order_acquire);
    while (n) {
      E* nx = n->next.load(std::memory_order_acquire);
      bool unlink;
      if (n->is_marker()) {
        if (!nx) break;  // lone trailing marker is inert, keep it
        unlink = true;
      } else {
        unlink = fn(*n);
      }
      if (!unlink) {
        prev = n;
        n = nx;
        continue;
      }
      if (!nx) {
        // Last node: appenders may be CASing n->next right now. Push an inert
        // marker through the normal append path first; once n has a successor
        // it is interior and safe to unlink.
        append(E::make_marker());
        nx = n->next.load(std::memory_order_acquire);
      }
      prev->next.store(nx, std::memory_order_release);
      if (!n->is_marker()) {
        real_count_.fetch_sub(1, std::memory_order_relaxed);
        removed++;
      }
      E* hint = tail_.load(std::memory_order_acquire);
      if (hint == n)
        tail_.compare_exchange_strong(hint, prev, std::memory_order_acq_rel);
      EpochDomain::global().retire(n, [](void* p) {
        E* e = static_cast<E*>(p);
        TxnTag::unref(e->tag);
        delete e;
      });
      n = nx;
    }
    return removed;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    EpochDomain::Guard g;
    for (E* n = head_.next.load(std::memory_order_acquire); n;
         n = n->next.load(std::memory_order_acquire))
      if (!n->is_marker()) fn(*n);
  }

  int64_t size() const { return real_count_.load(std::memory_order_acquire); }

 protected:
  mutable E head_;  // sentinel marker
  std::atomic<E*> tail_{&head_};
  std::atomic<int64_t> real_count_{0};
};

class UpdateLockList : public LockList<UpdateEntry> {
 public:
  // Any update entry, regardless of owner status, whose key falls inside
  // [r.begin, r.end]? Own entries are skipped.
  ConflictHit conflicts_with_range(const KeyRange& r, const TxnTag* self) const;
};

class ScanLockList : public LockList<ScanEntry> {
 public:
  // Any scan entry, regardless of owner status, whose current range covers
  // the key? Own entries are skipped.
  ConflictHit conflicts_with_key(std::string_view key, const TxnTag* self) const;
};

}  // namespace griffin
