#ifndef GRIFFIN_HARNESS_STRESS_HPP_
#define GRIFFIN_HARNESS_STRESS_HPP_

#include <cstdint>
#include <string>

namespace griffin::harness {

// Token-conservation stress: every token lives under exactly one of two keys
// ("A!nnnn" or "B!nnnn"). Mover threads shuttle claimed tokens between the
// two regions inside one transaction (delete old key + insert new key);
// observer threads scan each region twice in one transaction and check
//   (1) conservation: |A| + |B| equals the token count,
//   (2) repeatability: both scans of a region agree within the transaction,
//   (3) prediction: a token whose moves all finished before the observation
//       began sits exactly where its last committed move put it.
struct StressOptions {
  int engine = 0;  // GRIFFIN_ENGINE_*
  uint32_t tokens = 64;
  int movers = 5;
  int observers = 3;
  double duration_s = 10.0;
  bool atomic_writes = false;             // baseline: serialize txn writes
  bool disable_scan_update_check = false; // self-test: cripple scan guard
  bool disable_rescan_validation = false; // self-test: cripple baseline guard
  uint64_t sync_interval_us = 200;
  uint32_t coop_sync_ops = 0;
  int sync_autostart = 1;
  uint64_t seed = 0x7a3c9f11;
};

struct StressResult {
  uint64_t moves_committed = 0;
  uint64_t observations = 0;
  uint64_t mover_aborts = 0;
  uint64_t observer_aborts = 0;
  uint64_t conservation_violations = 0;
  uint64_t repeatability_violations = 0;
  uint64_t prediction_violations = 0;
  uint64_t prediction_checks = 0;
  uint64_t invariant_violations = 0;  // engine self-reported
  bool lists_drained = false;  // lock lists empty after quiescent sync
  bool converged = false;      // final scan + lookups match expected tokens
  std::string detail;          // first anomaly, empty when clean

  uint64_t total_violations() const {
    return conservation_violations + repeatability_violations +
           prediction_violations;
  }
};

StressResult run_token_stress(const StressOptions& opt);

}  // namespace griffin::harness

#endif  // GRIFFIN_HARNESS_STRESS_HPP_
