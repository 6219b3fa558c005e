#include "griffin/range_store.hpp"

#include <string>

namespace griffin {

// Anchor the instantiation shared by both engines so its code is compiled
// (and warned about) exactly once.
template class SkipList<std::string>;

}  // namespace griffin
