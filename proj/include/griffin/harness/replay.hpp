#pragma once

#include <cstdint>
#include <string>

// Deterministic sequential replay: drives one engine and the reference model
// through an identical seeded op stream, one transaction at a time, stepping
// the engine's synchronization after every finished txn, and reports any
// observable divergence (status codes, read results, range results, or full
// committed state at checkpoints).

namespace griffin::harness {

struct ReplayOptions {
  int engine = 0;  // GRIFFIN_ENGINE_*
  uint64_t seed = 42;
  uint64_t ops = 100000;
  uint32_t universe = 400;      // distinct keys the stream draws from
  uint64_t check_every = 500;   // full-state comparison period, in txns
};

struct ReplayResult {
  uint64_t ops_executed = 0;
  uint64_t txns_run = 0;
  uint64_t divergences = 0;
  uint64_t invariant_violations = 0;
  std::string first_divergence;
};

ReplayResult replay_sequential(const ReplayOptions& opt);

}  // namespace griffin::harness
