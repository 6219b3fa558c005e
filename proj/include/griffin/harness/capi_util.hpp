#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "griffin.h"

// Small conveniences shared by the harness pieces. Everything here talks to
// the engines strictly through the public C API.

namespace griffin::harness {

using KvVec = std::vector<std::pair<std::string, std::string>>;

// Scan callback accumulating results into a KvVec.
inline int collect_cb(void* ctx, const char* k, size_t kl, const char* v,
                      size_t vl) {
  static_cast<KvVec*>(ctx)->emplace_back(std::string(k, kl),
                                         std::string(v, vl));
  return 0;
}

inline int scan_collect(griffin_txn_t* txn, const std::string& begin,
                        const std::string& end, size_t limit, KvVec* out) {
  out->clear();
  return griffin_scan(txn, begin.data(), begin.size(), end.data(), end.size(),
                      limit, collect_cb, out);
}

inline int lookup_str(griffin_txn_t* txn, const std::string& key,
                      std::string* out, bool* found) {
  char buf[4096];
  size_t len = 0;
  int rc = griffin_lookup(txn, key.data(), key.size(), buf, sizeof buf, &len);
  *found = (rc == GRIFFIN_OK);
  if (rc == GRIFFIN_OK && out) out->assign(buf, len);
  return rc;
}

inline int insert_str(griffin_txn_t* txn, const std::string& key,
                      const std::string& val) {
  return griffin_insert(txn, key.data(), key.size(), val.data(), val.size());
}

inline int delete_str(griffin_txn_t* txn, const std::string& key) {
  return griffin_delete(txn, key.data(), key.size());
}

/// splitmix64: tiny deterministic stream for workload generation.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  double unit() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }
};

/// Decorrelated seed for stream `id` of a run seeded with `seed`.
///
/// splitmix64's state moves by a fixed increment, so seeds that differ by a
/// small multiple of that increment produce the same sequence shifted by a
/// few steps. Feeding the id through the output mix instead lands each
/// stream at an unrelated point in state space.
inline uint64_t substream(uint64_t seed, uint64_t id) {
  return Rng(seed + id).next();
}

}  // namespace griffin::harness
