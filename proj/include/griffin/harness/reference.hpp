#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Independent correctness oracle: a single-threaded transactional map built
// on std::map from first principles, mirroring the engine contract (abort
// codes, auto-abort on failed writes, inclusive scan bounds, result limits).
// Deliberately written against the public C API's semantics only, never
// against engine internals.

namespace griffin::harness {

enum class RefStatus {
  Ok,
  NotFound,
  AbortKeyExists,
  AbortKeyNotFound,
  Invalid,
  Fault,
};

class ReferenceModel {
 public:
  RefStatus begin();
  RefStatus insert(const std::string& key, const std::string& value);
  RefStatus erase(const std::string& key);
  RefStatus lookup(const std::string& key, std::string* out) const;
  RefStatus scan(const std::string& begin, const std::string& end,
                 size_t limit,
                 std::vector<std::pair<std::string, std::string>>* out) const;
  RefStatus commit();
  RefStatus abort();

  bool in_txn() const { return in_txn_; }
  const std::map<std::string, std::string>& committed() const { return map_; }

 private:
  // nullopt overlay entry = staged delete.
  using Overlay = std::map<std::string, std::optional<std::string>>;
  bool visible(const std::string& key, std::string* out) const;

  std::map<std::string, std::string> map_;
  Overlay overlay_;
  std::vector<std::string> staged_keys_;  // one write per key per txn
  bool in_txn_ = false;
};

}  // namespace griffin::harness
