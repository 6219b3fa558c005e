#include "griffin/point_store.hpp"

#include <cassert>
#include <cstring>
#include <new>

namespace griffin {

Rec* rec_make(Rec::St st, TxnTag* owner, std::string_view key,
              std::string_view value) {
  Rec* r = static_cast<Rec*>(::malloc(sizeof(Rec) + key.size() + value.size()));
  if (!r) throw std::bad_alloc();
  r->state = st;
  owner->ref();
  r->owner = owner;
  r->klen = static_cast<uint32_t>(key.size());
  r->vlen = static_cast<uint32_t>(value.size());
  std::memcpy(r->data, key.data(), key.size());
  if (!value.empty()) std::memcpy(r->data + key.size(), value.data(), value.size());
  return r;
}

void rec_free(Rec* r) {
  TxnTag::unref(r->owner);
  ::free(r);
}

void rec_retire(Rec* r) {
  EpochDomain::global().retire(r, [](void* p) { rec_free(static_cast<Rec*>(p)); });
}

namespace {
uint64_t round_pow2(uint64_t v) {
  uint64_t p = 1;
  while (p < v) p <<= 1;
  return p;
}
}  // namespace

PointStore::PointStore(uint64_t slots, double max_load_factor,
                       uint64_t hash_seed)
    : nslots_(round_pow2(slots < 16 ? 16 : slots)),
      mask_(nslots_ - 1),
      max_entries_(static_cast<uint64_t>(double(nslots_) * max_load_factor)),
      seed_(hash_seed) {
  slots_ = new std::atomic<Rec*>[nslots_];
  for (uint64_t i = 0; i < nslots_; i++)
    slots_[i].store(nullptr, std::memory_order_relaxed);
}

PointStore::~PointStore() {
  // Callers quiesce and drain the epoch domain before tearing the store down,
  // so whatever the slots still hold is exclusively ours.
  for (uint64_t i = 0; i < nslots_; i++) {
    if (Rec* r = slots_[i].load(std::memory_order_relaxed)) rec_free(r);
  }
  delete[] slots_;
}

uint64_t PointStore::locate(std::string_view key, Rec** out) const {
  return locate_at(home_slot(key), key, out);
}

uint64_t PointStore::locate_at(uint64_t start, std::string_view key,
                               Rec** out) const {
  uint64_t i = start;
  for (uint64_t n = 0; n < nslots_; n++, i = (i + 1) & mask_) {
    Rec* r = slots_[i].load(std::memory_order_acquire);
    if (!r || rec_key_eq(r, key)) {
      *out = r;
      return i;
    }
  }
  *out = nullptr;  // table saturated with other keys; load gate prevents this
  return i & mask_;
}

PointStore::MutRes PointStore::insert(std::string_view key,
                                      std::string_view value, TxnTag* owner) {
  EpochDomain::Guard g;
  uint64_t i = home_slot(key);
  for (uint64_t n = 0; n < nslots_; n++, i = (i + 1) & mask_) {
    Rec* r = slots_[i].load(std::memory_order_acquire);
  reexamine:
    if (r == nullptr) {
      // First free slot on this key's probe path: every racing insert of the
      // same key converges here, and the slot CAS picks the single winner.
      if (claimed_.fetch_add(1, std::memory_order_acq_rel) + 1 > max_entries_) {
        claimed_.fetch_sub(1, std::memory_order_acq_rel);
        return {Status::Capacity, nullptr};
      }
      Rec* nr = rec_make(Rec::St::Live, owner, key, value);
      if (slots_[i].compare_exchange_strong(r, nr, std::memory_order_acq_rel,
                                            std::memory_order_acquire)) {
        return {Status::Ok, nr};
      }
      // Lost the slot; it may now hold our key (racing insert) or another.
      claimed_.fetch_sub(1, std::memory_order_acq_rel);
      rec_free(nr);  // never published
      goto reexamine;
    }
    if (r->key() != key) continue;
    switch (r->state) {
      case Rec::St::Live:
        return {Status::AbortKeyExists, nullptr};
      case Rec::St::Tomb:
        // A delete still in flight downstream. Treat the key as existing
        // until the tombstone is purged or rolled back.
        return {Status::AbortKeyExists, nullptr};
      case Rec::St::Slim: {
        Rec* nr = rec_make(Rec::St::Live, owner, key, value);
        if (slots_[i].compare_exchange_strong(r, nr, std::memory_order_acq_rel,
                                              std::memory_order_acquire)) {
          rec_retire(r);
          return {Status::Ok, nr};
        }
        rec_free(nr);
        goto reexamine;
      }
    }
  }
  return {Status::Capacity, nullptr};
}

PointStore::MutRes PointStore::erase(std::string_view key, TxnTag* owner) {
  EpochDomain::Guard g;
  Rec* r;
  uint64_t i = locate(key, &r);
  for (;;) {
    if (!r || r->state == Rec::St::Slim || r->state == Rec::St::Tomb)
      return {Status::AbortKeyNotFound, nullptr};
    // Live: deletable only once the inserting txn committed. An unfinished
    // or aborted insert still owns this record; deleting it here would leave
    // that txn's rollback nothing to undo against.
    if (tag_status(r->owner) != TxnStatus::Committed)
      return {Status::AbortKeyNotFound, nullptr};
    Rec* tr = rec_make(Rec::St::Tomb, owner, key, r->value());
    if (slots_[i].compare_exchange_strong(r, tr, std::memory_order_acq_rel,
                                          std::memory_order_acquire)) {
      rec_retire(r);
      return {Status::Ok, tr};
    }
    rec_free(tr);  // slot changed under us; r reloaded by the CAS, re-decide
  }
}

Status PointStore::lookup(std::string_view key, std::string* out) const {
  EpochDomain::Guard g;
  Rec* r;
  locate(key, &r);
  if (r && r->state == Rec::St::Live) {
    if (out) out->assign(r->value());
    return Status::Ok;
  }
  return Status::NotFound;
}

Status PointStore::fetch_for_scan(std::string_view key, std::string* out) const {
  EpochDomain::Guard g;
  Rec* r;
  locate(key, &r);
  if (r && (r->state == Rec::St::Live || r->state == Rec::St::Tomb)) {
    if (out) out->assign(r->value());
    return Status::Ok;
  }
  return Status::Fault;
}

PointStore::SettledView PointStore::settled_view(std::string_view key,
                                                 std::string* value) const {
  EpochDomain::Guard g;
  Rec* r;
  locate(key, &r);
  if (!r || r->state == Rec::St::Slim) return SettledView::Absent;
  TxnStatus st = tag_status(r->owner);
  if (r->state == Rec::St::Live) {
    if (st != TxnStatus::Committed) return SettledView::Unsettled;
    if (value) value->assign(r->value());
    return SettledView::Present;
  }
  // Tomb: a committed delete is durable whether or not the slot was purged
  // yet; an active or aborted one still has a pending resolution.
  return st == TxnStatus::Committed ? SettledView::Absent
                                    : SettledView::Unsettled;
}

bool PointStore::still_current(std::string_view key, const Rec* rec) const {
  EpochDomain::Guard g;
  Rec* r;
  locate(key, &r);
  return r == rec;
}

bool PointStore::purge(std::string_view key, Rec* expected_tomb) {
  EpochDomain::Guard g;
  Rec* r;
  uint64_t i = locate(key, &r);
  if (r != expected_tomb) return false;
  Rec* nr = rec_make(Rec::St::Slim, stable_tag(), key, {});
  if (slots_[i].compare_exchange_strong(r, nr, std::memory_order_acq_rel)) {
    rec_retire(r);
    return true;
  }
  rec_free(nr);
  return false;
}

bool PointStore::rollback_insert(std::string_view key, Rec* expected_live) {
  EpochDomain::Guard g;
  Rec* r;
  uint64_t i = locate(key, &r);
  if (r != expected_live) return false;
  Rec* nr = rec_make(Rec::St::Slim, stable_tag(), key, {});
  if (slots_[i].compare_exchange_strong(r, nr, std::memory_order_acq_rel)) {
    rec_retire(r);
    return true;
  }
  rec_free(nr);
  return false;
}

bool PointStore::rollback_delete(std::string_view key, Rec* expected_tomb) {
  EpochDomain::Guard g;
  Rec* r;
  uint64_t i = locate(key, &r);
  if (r != expected_tomb) return false;
  // Reinstate the displaced value; it was committed state before the delete.
  Rec* nr = rec_make(Rec::St::Live, stable_tag(), key, expected_tomb->value());
  if (slots_[i].compare_exchange_strong(r, nr, std::memory_order_acq_rel)) {
    rec_retire(r);
    return true;
  }
  rec_free(nr);
  return false;
}

}  // namespace griffin
