#include "griffin/harness/reference.hpp"

#include <algorithm>

namespace griffin::harness {

RefStatus ReferenceModel::begin() {
  if (in_txn_) return RefStatus::Invalid;
  overlay_.clear();
  staged_keys_.clear();
  in_txn_ = true;
  return RefStatus::Ok;
}

bool ReferenceModel::visible(const std::string& key, std::string* out) const {
  auto ov = overlay_.find(key);
  if (ov != overlay_.end()) {
    if (!ov->second.has_value()) return false;  // staged delete
    if (out) *out = *ov->second;
    return true;
  }
  auto it = map_.find(key);
  if (it == map_.end()) return false;
  if (out) *out = it->second;
  return true;
}

RefStatus ReferenceModel::insert(const std::string& key,
                                 const std::string& value) {
  if (!in_txn_ || key.empty()) return RefStatus::Invalid;
  if (std::find(staged_keys_.begin(), staged_keys_.end(), key) !=
      staged_keys_.end()) {
    abort();
    return RefStatus::Fault;
  }
  if (visible(key, nullptr)) {
    abort();
    return RefStatus::AbortKeyExists;
  }
  overlay_[key] = value;
  staged_keys_.push_back(key);
  return RefStatus::Ok;
}

RefStatus ReferenceModel::erase(const std::string& key) {
  if (!in_txn_ || key.empty()) return RefStatus::Invalid;
  if (std::find(staged_keys_.begin(), staged_keys_.end(), key) !=
      staged_keys_.end()) {
    abort();
    return RefStatus::Fault;
  }
  if (!visible(key, nullptr)) {
    abort();
    return RefStatus::AbortKeyNotFound;
  }
  overlay_[key] = std::nullopt;
  staged_keys_.push_back(key);
  return RefStatus::Ok;
}

RefStatus ReferenceModel::lookup(const std::string& key,
                                 std::string* out) const {
  if (!in_txn_ || key.empty()) return RefStatus::Invalid;
  return visible(key, out) ? RefStatus::Ok : RefStatus::NotFound;
}

RefStatus ReferenceModel::scan(
    const std::string& begin, const std::string& end, size_t limit,
    std::vector<std::pair<std::string, std::string>>* out) const {
  if (!in_txn_ || begin.empty() || end.empty() || begin > end)
    return RefStatus::Invalid;
  out->clear();
  // Merge committed state with the overlay over the inclusive range.
  auto it = map_.lower_bound(begin);
  auto ov = overlay_.lower_bound(begin);
  while (limit == 0 || out->size() < limit) {
    bool have_m = it != map_.end() && it->first <= end;
    bool have_o = ov != overlay_.end() && ov->first <= end;
    if (!have_m && !have_o) break;
    if (have_o && (!have_m || ov->first <= it->first)) {
      bool shadows = have_m && ov->first == it->first;
      if (ov->second.has_value())
        out->emplace_back(ov->first, *ov->second);
      if (shadows) ++it;
      ++ov;
    } else {
      out->emplace_back(it->first, it->second);
      ++it;
    }
  }
  return RefStatus::Ok;
}

RefStatus ReferenceModel::commit() {
  if (!in_txn_) return RefStatus::Invalid;
  for (auto& [k, v] : overlay_) {
    if (v.has_value())
      map_[k] = *v;
    else
      map_.erase(k);
  }
  overlay_.clear();
  staged_keys_.clear();
  in_txn_ = false;
  return RefStatus::Ok;
}

RefStatus ReferenceModel::abort() {
  if (!in_txn_) return RefStatus::Invalid;
  overlay_.clear();
  staged_keys_.clear();
  in_txn_ = false;
  return RefStatus::Ok;
}

}  // namespace griffin::harness
