#pragma once

#include "griffin/skiplist.hpp"

namespace griffin {

// Ordered index for the hybrid engine, kept in sync lazily by the sweep
// pipeline. The payload is the key's value as of the last reconcile: the
// engine has no update-in-place (a value change is a delete plus an insert),
// so a key's value is immutable for its whole lifetime in the hash table and
// the copy here can never go stale while the key is visible. Any key in a
// transitional state still has a lock-list entry that aborts scans over it,
// so range reads can emit straight from these nodes.
using RangeStore = SkipList<std::string>;

}  // namespace griffin
