#include "griffin/lock_sets.hpp"

namespace griffin {

TxnTag* stable_tag() {
  static TxnTag* t = [] {
    auto* tag = new TxnTag();
    tag->status.store(TxnStatus::Committed, std::memory_order_release);
    return tag;  // refs stay >= 1 forever
  }();
  return t;
}

ConflictHit UpdateLockList::conflicts_with_range(const KeyRange& r,
                                                 const TxnTag* self) const {
  EpochDomain::Guard g;
  ConflictHit hit;
  for (UpdateEntry* n = head_.next.load(std::memory_order_acquire); n;
       n = n->next.load(std::memory_order_acquire)) {
    if (n->is_marker() || n->tag == self) continue;
    hit.visited++;
    std::string_view k = n->key.view();
    if (key_compare(k, r.begin) >= 0 && key_compare(k, r.end) <= 0) {
      hit.found = true;
      hit.status = tag_status(n->tag);
      return hit;
    }
  }
  return hit;
}

ConflictHit ScanLockList::conflicts_with_key(std::string_view key,
                                             const TxnTag* self) const {
  EpochDomain::Guard g;
  ConflictHit hit;
  for (ScanEntry* n = head_.next.load(std::memory_order_acquire); n;
       n = n->next.load(std::memory_order_acquire)) {
    if (n->is_marker() || n->tag == self) continue;
    hit.visited++;
    const KeyBuf* end = n->end.load(std::memory_order_acquire);
    if (key_compare(key, n->begin.view()) >= 0 &&
        key_compare(key, end->view()) <= 0) {
      hit.found = true;
      hit.status = tag_status(n->tag);
      return hit;
    }
  }
  return hit;
}

}  // namespace griffin
