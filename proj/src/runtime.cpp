#include "griffin/runtime.hpp"

#include <cassert>
#include <mutex>
#include <vector>

namespace griffin {

// ---------------------------------------------------------------------------
// Thread slot registry
// ---------------------------------------------------------------------------

namespace {

std::atomic<uint8_t> g_slot_taken[ThreadSlots::kMaxThreads] = {};
std::atomic<int> g_watermark{0};

struct SlotLease {
  int id = -1;
  ~SlotLease();
};

int claim_slot() {
  // Start probing from a per-thread-ish offset to avoid a thundering herd on
  // slot 0 when many threads start at once.
  static std::atomic<uint32_t> hint{0};
  uint32_t start = hint.fetch_add(1, std::memory_order_relaxed);
  for (int i = 0; i < ThreadSlots::kMaxThreads; i++) {
    int s = (start + i) % ThreadSlots::kMaxThreads;
    uint8_t expect = 0;
    if (g_slot_taken[s].compare_exchange_strong(expect, 1,
                                                std::memory_order_acq_rel)) {
      // Raise the watermark before the slot can publish an epoch pin, so a
      // scan that could see the pin also sees the raised bound.
      int w = g_watermark.load(std::memory_order_seq_cst);
      while (w < s + 1 && !g_watermark.compare_exchange_weak(
                              w, s + 1, std::memory_order_seq_cst)) {
      }
      return s;
    }
  }
  // More live threads than slots; not a supported configuration.
  assert(false && "thread slot table exhausted");
  return ThreadSlots::kMaxThreads - 1;
}

thread_local SlotLease t_lease;

}  // namespace

int ThreadSlots::self() {
  if (t_lease.id < 0) t_lease.id = claim_slot();
  return t_lease.id;
}

int ThreadSlots::watermark() {
  return g_watermark.load(std::memory_order_seq_cst);
}

// ---------------------------------------------------------------------------
// Epoch domain
// ---------------------------------------------------------------------------

namespace {

struct Retired {
  void* p;
  EpochDomain::Deleter d;
  uint64_t epoch;
};

struct RetireBin {
  std::vector<Retired> items;
};

// Per-thread retire bins, plus an orphan list for bins abandoned by exited
// threads; the next flush() adopts orphans so nothing leaks.
RetireBin* g_bins[ThreadSlots::kMaxThreads] = {};
std::mutex g_orphan_mu;
std::vector<Retired> g_orphans;

thread_local int t_guard_depth = 0;

RetireBin& my_bin() {
  int s = ThreadSlots::self();
  if (!g_bins[s]) g_bins[s] = new RetireBin;
  return *g_bins[s];
}

}  // namespace

SlotLease::~SlotLease() {
  if (id < 0) return;
  if (RetireBin* bin = g_bins[id]; bin && !bin->items.empty()) {
    std::lock_guard<std::mutex> lk(g_orphan_mu);
    g_orphans.insert(g_orphans.end(), bin->items.begin(), bin->items.end());
    bin->items.clear();
  }
  g_slot_taken[id].store(0, std::memory_order_release);
}

EpochDomain& EpochDomain::global() {
  static EpochDomain dom;
  return dom;
}

EpochDomain::Guard::Guard() {
  outer_ = (t_guard_depth++ == 0);
  if (!outer_) return;
  EpochDomain& dom = EpochDomain::global();
  Slot& slot = dom.slots_[ThreadSlots::self()];
  // Announce-and-verify loop: publish the epoch we think is current, then
  // re-read; if the global moved we re-announce so the reclaimer never waits
  // on a stale pin. seq_cst on the store pairs with the reclaimer's scan.
  uint64_t e = dom.epoch_.load(std::memory_order_acquire);
  for (;;) {
    slot.pin.store((e << 1) | 1, std::memory_order_seq_cst);
    uint64_t now = dom.epoch_.load(std::memory_order_seq_cst);
    if (now == e) break;
    e = now;
  }
}

EpochDomain::Guard::~Guard() {
  if (!outer_) {
    --t_guard_depth;
    return;
  }
  EpochDomain& dom = EpochDomain::global();
  dom.slots_[ThreadSlots::self()].pin.store(0, std::memory_order_release);
  --t_guard_depth;
}

void EpochDomain::retire(void* p, Deleter d) {
  my_bin().items.push_back({p, d, epoch_.load(std::memory_order_acquire)});
}

bool EpochDomain::try_advance() {
  uint64_t e = epoch_.load(std::memory_order_seq_cst);
  // Any thread whose pin we must not miss claimed its slot (and raised the
  // watermark) before publishing the pin, so the bound read here covers it.
  int hw = ThreadSlots::watermark();
  for (int i = 0; i < hw; i++) {
    uint64_t pin = slots_[i].pin.load(std::memory_order_seq_cst);
    if ((pin & 1) && (pin >> 1) != e) return false;  // straggler still in e-1
  }
  return epoch_.compare_exchange_strong(e, e + 1, std::memory_order_seq_cst);
}

void EpochDomain::reap(int slot_id) {
  RetireBin* bin = g_bins[slot_id];
  if (!bin) return;
  uint64_t e = epoch_.load(std::memory_order_acquire);
  auto& v = bin->items;
  size_t keep = 0;
  for (size_t i = 0; i < v.size(); i++) {
    if (v[i].epoch + 2 <= e)
      v[i].d(v[i].p);
    else
      v[keep++] = v[i];
  }
  v.resize(keep);
}

void EpochDomain::flush() {
  // Must not run inside a guard on this thread: our own pin would block the
  // advance. Reentrant flush is a no-op.
  if (t_guard_depth > 0) return;
  {
    std::lock_guard<std::mutex> lk(g_orphan_mu);
    if (!g_orphans.empty()) {
      auto& mine = my_bin().items;
      mine.insert(mine.end(), g_orphans.begin(), g_orphans.end());
      g_orphans.clear();
    }
  }
  try_advance();
  try_advance();
  reap(ThreadSlots::self());
}

}  // namespace griffin
