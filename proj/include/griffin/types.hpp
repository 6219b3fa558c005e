#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace griffin {

// Keys are non-empty byte strings ordered lexicographically (shorter keys sort
// before longer keys sharing a prefix). Values are opaque bytes, possibly empty.
using Key = std::string;
using Value = std::string;

// Bytewise lexicographic order. Hand-rolled: keys are short, and the libc
// memcmp's size dispatch costs more than the comparison itself on the scan
// paths that call this per node.
inline int key_compare(std::string_view a, std::string_view b) {
  const char* pa = a.data();
  const char* pb = b.data();
  size_t n = a.size() < b.size() ? a.size() : b.size();
  while (n >= 8) {
    uint64_t x, y;
    std::memcpy(&x, pa, 8);
    std::memcpy(&y, pb, 8);
    if (x != y) {
      if constexpr (std::endian::native == std::endian::little) {
        x = __builtin_bswap64(x);
        y = __builtin_bswap64(y);
      }
      return x < y ? -1 : 1;
    }
    pa += 8;
    pb += 8;
    n -= 8;
  }
  for (size_t i = 0; i < n; i++) {
    unsigned char ca = static_cast<unsigned char>(pa[i]);
    unsigned char cb = static_cast<unsigned char>(pb[i]);
    if (ca != cb) return ca < cb ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

inline bool key_valid(std::string_view k) { return !k.empty(); }

// Closed interval [begin, end]; both endpoints are part of the range.
struct KeyRange {
  Key begin;
  Key end;

  bool valid() const {
    return key_valid(begin) && key_valid(end) && key_compare(begin, end) <= 0;
  }
  bool contains(std::string_view k) const {
    return key_compare(begin, k) <= 0 && key_compare(k, end) <= 0;
  }
};

inline bool range_contains(const KeyRange& r, std::string_view k) {
  return r.contains(k);
}

// Transaction lifecycle. Transitions are monotone: Active -> Committed or
// Active -> Aborted, never back.
enum class TxnStatus : uint8_t { Active = 0, Committed = 1, Aborted = 2 };

inline bool is_terminal(TxnStatus s) { return s != TxnStatus::Active; }

enum class OpKind : uint8_t { Insert = 0, Delete = 1 };

// Operation outcome surfaced by both engines. Abort* codes mean the engine
// finalized the transaction itself; the abort reason is informational.
// NotFound is the benign lookup miss, not an error. Fault codes indicate
// caller mistakes or internal invariant breaches, never normal contention.
enum class Status : int {
  Ok = 0,
  NotFound = 1,
  AbortPhantom = 2,
  AbortStaleRead = 3,
  AbortKeyExists = 4,
  AbortKeyNotFound = 5,
  Invalid = 6,
  Fault = 7,
  Capacity = 8,
};

inline bool is_abort(Status s) {
  return s == Status::AbortPhantom || s == Status::AbortStaleRead ||
         s == Status::AbortKeyExists || s == Status::AbortKeyNotFound;
}

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::NotFound: return "not_found";
    case Status::AbortPhantom: return "abort_phantom_risk";
    case Status::AbortStaleRead: return "abort_stale_read_risk";
    case Status::AbortKeyExists: return "abort_key_exists";
    case Status::AbortKeyNotFound: return "abort_key_not_found";
    case Status::Invalid: return "invalid_argument";
    case Status::Fault: return "fault";
    case Status::Capacity: return "capacity_exceeded";
  }
  return "unknown";
}

// Small key holder with inline storage for the common short-key case.
// Used inside lock entries and skip list nodes; immutable once assigned.
struct KeyBuf {
  static constexpr uint32_t kInline = 24;

  uint32_t len = 0;
  char inl[kInline];
  char* heap = nullptr;

  KeyBuf() = default;
  KeyBuf(const KeyBuf&) = delete;
  KeyBuf& operator=(const KeyBuf&) = delete;
  ~KeyBuf() { delete[] heap; }

  void assign(std::string_view k) {
    delete[] heap;
    heap = nullptr;
    len = static_cast<uint32_t>(k.size());
    char* dst = inl;
    if (len > kInline) {
      heap = new char[len];
      dst = heap;
    }
    std::memcpy(dst, k.data(), len);
  }

  std::string_view view() const {
    return std::string_view(heap ? heap : inl, len);
  }
};

}  // namespace griffin
