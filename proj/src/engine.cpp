#include "griffin/engine.hpp"

#include "griffin/baseline_index.hpp"
#include "griffin/griffin_index.hpp"

namespace griffin {

Status Config::validate() const {
  if (engine != EngineKind::Griffin && engine != EngineKind::Baseline)
    return Status::Invalid;
  if (capacity_slots < 16 || capacity_slots > (1ull << 34))
    return Status::Invalid;
  if (!(max_load_factor > 0.05 && max_load_factor <= 0.95))
    return Status::Invalid;
  if (sync_interval_us == 0 || sync_interval_us > 60ull * 1000 * 1000)
    return Status::Invalid;
  return Status::Ok;
}

std::unique_ptr<EngineBase> make_engine(const Config& cfg) {
  if (cfg.validate() != Status::Ok) return nullptr;
  if (cfg.engine == EngineKind::Baseline)
    return std::make_unique<BaselineIndex>(cfg);
  return std::make_unique<GriffinIndex>(cfg);
}

}  // namespace griffin
