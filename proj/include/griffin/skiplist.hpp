#pragma once

#include <atomic>
#include <cstdint>
#include <cstring>
#include <new>
#include <string>
#include <string_view>
#include <thread>

#include "griffin/runtime.hpp"
#include "griffin/types.hpp"

namespace griffin {

// Empty value type for keys-only instantiations.
struct Unit {};

// ---------------------------------------------------------------------------
// Concurrent ordered map: optimistic lazy skip list. Readers (get/scan) are
// lock-free and never block; writers lock only the handful of predecessor
// nodes they relink, validate, and retry on interference. Removed nodes are
// unlinked under locks and reclaimed through the epoch domain so in-flight
// readers can keep walking through them.
//
// Node flags: `marked` = logically deleted, `fully_linked` = visible at all
// of its levels. Readers count a node only when fully linked and unmarked.
// ---------------------------------------------------------------------------

template <class V>
class SkipList {
 public:
  static constexpr int kMaxLevel = 20;  // comfortably covers ~1M keys at p=1/2

  explicit SkipList(uint64_t level_seed = 0x9e3779b97f4a7c15ULL)
      : level_seed_(level_seed) {
    head_ = Node::make(std::string_view{}, V{}, kMaxLevel - 1);
    head_->fully_linked.store(true, std::memory_order_release);
  }

  ~SkipList() {
    Node* n = head_;
    while (n) {
      Node* nx = n->next[0].load(std::memory_order_relaxed);
      Node::destroy(n);
      n = nx;
    }
  }
  SkipList(const SkipList&) = delete;
  SkipList& operator=(const SkipList&) = delete;

  // Returns false if the key is already present.
  bool insert(std::string_view key, const V& value) {
    int top = random_level();
    Node* preds[kMaxLevel];
    Node* succs[kMaxLevel];
    for (;;) {
      EpochDomain::Guard g;
      int lfound = find(key, preds, succs);
      if (lfound != -1) {
        Node* f = succs[lfound];
        if (!f->marked.load(std::memory_order_acquire)) {
          // Wait out a racing inserter that has not finished linking yet.
          while (!f->fully_linked.load(std::memory_order_acquire))
            spin_pause();
          return false;
        }
        continue;  // found a corpse mid-removal; retry after it is unlinked
      }
      LockSpan locks;
      bool valid = true;
      for (int l = 0; valid && l <= top; l++) {
        locks.acquire(preds[l]);
        valid = !preds[l]->marked.load(std::memory_order_acquire) &&
                preds[l]->next[l].load(std::memory_order_acquire) == succs[l];
      }
      if (!valid) continue;  // LockSpan releases on destruction
      Node* node = Node::make(key, value, top);
      for (int l = 0; l <= top; l++)
        node->next[l].store(succs[l], std::memory_order_relaxed);
      for (int l = 0; l <= top; l++)
        preds[l]->next[l].store(node, std::memory_order_release);
      node->fully_linked.store(true, std::memory_order_release);
      return true;
    }
  }

  // Returns false if the key is absent. On success *out (if given) receives
  // the removed value.
  bool remove(std::string_view key, V* out = nullptr) {
    Node* victim = nullptr;
    bool marked_by_us = false;
    int top = -1;
    Node* preds[kMaxLevel];
    Node* succs[kMaxLevel];
    for (;;) {
      EpochDomain::Guard g;
      int lfound = find(key, preds, succs);
      if (!marked_by_us) {
        if (lfound == -1) return false;
        victim = succs[lfound];
        if (!victim->fully_linked.load(std::memory_order_acquire) ||
            victim->top != lfound ||
            victim->marked.load(std::memory_order_acquire))
          return false;
        top = victim->top;
        victim->lock();
        if (victim->marked.load(std::memory_order_acquire)) {
          victim->unlock();
          return false;  // somebody else is removing it
        }
        victim->marked.store(true, std::memory_order_release);
        marked_by_us = true;
      }
      {
        LockSpan locks;
        bool valid = true;
        for (int l = 0; valid && l <= top; l++) {
          locks.acquire(preds[l]);
          valid = !preds[l]->marked.load(std::memory_order_acquire) &&
                  preds[l]->next[l].load(std::memory_order_acquire) == victim;
        }
        if (!valid) continue;  // re-find; victim stays marked and locked
        if (out) *out = victim->value;
        for (int l = top; l >= 0; l--)
          preds[l]->next[l].store(
              victim->next[l].load(std::memory_order_relaxed),
              std::memory_order_release);
        victim->unlock();
      }
      EpochDomain::global().retire(victim, [](void* p) {
        Node::destroy(static_cast<Node*>(p));
      });
      return true;
    }
  }

  // Lock-free point read of current state.
  bool get(std::string_view key, V* out = nullptr) const {
    EpochDomain::Guard g;
    Node* pred = head_;
    Node* curr = nullptr;
    for (int l = kMaxLevel - 1; l >= 0; l--) {
      curr = pred->next[l].load(std::memory_order_acquire);
      while (curr && key_compare(curr->key_view(), key) < 0) {
        pred = curr;
        curr = pred->next[l].load(std::memory_order_acquire);
      }
      if (curr && curr->key_view() == key) {
        if (!curr->fully_linked.load(std::memory_order_acquire) ||
            curr->marked.load(std::memory_order_acquire))
          return false;
        if (out) *out = curr->value;
        return true;
      }
    }
    return false;
  }

  bool contains(std::string_view key) const { return get(key, nullptr); }

  // In-order walk of [begin, end], both bounds inclusive. fn(key, value) is
  // invoked for each visible entry; returning false stops the walk. limit 0
  // means unbounded. Returns the number of entries handed to fn.
  //
  // `warm` issues prefetches a couple of hops ahead of the walk. That pays
  // off when the range is not cache-resident (the common case) and is pure
  // overhead when re-walking a range read moments ago, so callers doing an
  // immediate second pass should turn it off.
  template <class Fn>
  size_t scan(std::string_view begin, std::string_view end, size_t limit,
              Fn&& fn, bool warm = true) const {
    EpochDomain::Guard g;
    Node* pred = head_;
    Node* curr = nullptr;
    for (int l = kMaxLevel - 1; l >= 0; l--) {
      curr = pred->next[l].load(std::memory_order_acquire);
      while (curr && key_compare(curr->key_view(), begin) < 0) {
        pred = curr;
        curr = pred->next[l].load(std::memory_order_acquire);
      }
    }
    size_t count = 0;
    while (curr && key_compare(curr->key_view(), end) <= 0) {
      if (limit != 0 && count >= limit) break;
      // The level-0 chain is a serial chase through scattered nodes, so a
      // cold walk is bound by one cache miss per hop. Issue the successor's
      // line before working on this node, and reach through the level-1
      // pointer (which skips the immediate successor) to start the node
      // after that; both fetches then overlap with this node's compare and
      // callback.
      Node* nxt = curr->next[0].load(std::memory_order_acquire);
      if (warm) {
        if (nxt) __builtin_prefetch(static_cast<const void*>(nxt), 0, 1);
        if (curr->top >= 1) {
          Node* ahead = curr->next[1].load(std::memory_order_relaxed);
          if (ahead) {
            const char* a = reinterpret_cast<const char*>(ahead);
            __builtin_prefetch(a, 0, 1);
            __builtin_prefetch(a + 64, 0, 1);
          }
        }
        if (curr->top >= 2) {
          Node* far = curr->next[2].load(std::memory_order_relaxed);
          if (far) {
            const char* f = reinterpret_cast<const char*>(far);
            __builtin_prefetch(f, 0, 1);
            __builtin_prefetch(f + 64, 0, 1);
          }
        }
      }
      if (curr->fully_linked.load(std::memory_order_acquire) &&
          !curr->marked.load(std::memory_order_acquire)) {
        if (!fn(curr->key_view(), curr->value)) {
          count++;
          break;
        }
        count++;
      }
      curr = nxt;
    }
    return count;
  }

 private:
  struct Node {
    V value;
    std::atomic<uint32_t> spin{0};
    std::atomic<bool> marked{false};
    std::atomic<bool> fully_linked{false};
    int top;  // highest valid index into next[]
    uint32_t klen;
    char* kdata;                 // points into the same allocation
    std::atomic<Node*> next[1];  // top+1 slots, then the key bytes

    std::string_view key_view() const { return {kdata, klen}; }

    void lock() {
      int spins = 0;
      while (spin.exchange(1, std::memory_order_acquire)) {
        if (++spins > 256) {
          std::this_thread::yield();
          spins = 0;
        } else {
          spin_pause();
        }
      }
    }
    void unlock() { spin.store(0, std::memory_order_release); }

    static Node* make(std::string_view key, const V& value, int top) {
      size_t levels = size_t(top) + 1;
      size_t bytes = sizeof(Node) + (levels - 1) * sizeof(std::atomic<Node*>) +
                     key.size();
      void* raw = ::operator new(bytes);
      Node* n = new (raw) Node(value, top);
      for (size_t l = 1; l < levels; l++)
        new (&n->next[l]) std::atomic<Node*>(nullptr);
      n->kdata = reinterpret_cast<char*>(raw) + sizeof(Node) +
                 (levels - 1) * sizeof(std::atomic<Node*>);
      n->klen = static_cast<uint32_t>(key.size());
      if (!key.empty()) std::memcpy(n->kdata, key.data(), key.size());
      return n;
    }

    static void destroy(Node* n) {
      n->~Node();
      ::operator delete(static_cast<void*>(n));
    }

   private:
    Node(const V& v, int t) : value(v), top(t), klen(0), kdata(nullptr) {
      next[0].store(nullptr, std::memory_order_relaxed);
    }
  };

  // Collects the per-level predecessor locks for a writer, deduplicating
  // repeated nodes, and releases them all when it goes out of scope.
  struct LockSpan {
    Node* held[kMaxLevel];
    int n = 0;
    void acquire(Node* node) {
      for (int i = 0; i < n; i++)
        if (held[i] == node) return;
      node->lock();
      held[n++] = node;
    }
    ~LockSpan() {
      for (int i = n - 1; i >= 0; i--) held[i]->unlock();
    }
  };

  static void spin_pause() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_ia32_pause();
#else
    std::this_thread::yield();
#endif
  }

  // Fills preds/succs at every level; returns the highest level at which the
  // key itself was found, or -1. The head sentinel compares below every key.
  int find(std::string_view key, Node** preds, Node** succs) const {
    int lfound = -1;
    Node* pred = head_;
    for (int l = kMaxLevel - 1; l >= 0; l--) {
      Node* curr = pred->next[l].load(std::memory_order_acquire);
      while (curr && key_compare(curr->key_view(), key) < 0) {
        pred = curr;
        curr = pred->next[l].load(std::memory_order_acquire);
      }
      if (lfound == -1 && curr && curr->key_view() == key) lfound = l;
      preds[l] = pred;
      succs[l] = curr;
    }
    return lfound;
  }

  int random_level() {
    thread_local uint64_t state = 0;
    if (state == 0) {
      static std::atomic<uint64_t> nonce{1};
      state = mix64(level_seed_ ^ nonce.fetch_add(1, std::memory_order_relaxed));
    }
    state = mix64(state + 0x9e3779b97f4a7c15ULL);
    int lvl = 0;
    uint64_t r = state;
    while ((r & 1) && lvl < kMaxLevel - 1) {
      lvl++;
      r >>= 1;
    }
    return lvl;
  }

  Node* head_;
  uint64_t level_seed_;
};

}  // namespace griffin
