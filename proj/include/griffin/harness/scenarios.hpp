#ifndef GRIFFIN_HARNESS_SCENARIOS_HPP_
#define GRIFFIN_HARNESS_SCENARIOS_HPP_

#include <string>

namespace griffin::harness {

// Outcome of one scripted interleaving. `detail` holds the first failed
// expectation; it stays empty when the scenario passed.
struct ScenarioResult {
  bool passed = true;
  std::string detail;
  double elapsed_s = 0.0;
};

// Two transactions race over one key range, interleaved on a single thread:
//  (a) a range is being scanned by a live transaction, and a writer that
//      tries to insert into it must abort;
//  (b) a live transaction holds an uncommitted insert, and a scanner that
//      covers that key must abort.
// Afterwards the surviving writer commits, a sync pass runs, and a fresh
// scan must observe the new key.
ScenarioResult scenario_phantom();

// A committed write whose range-store application is still pending must
// force scanners covering it to abort (insert and delete variants); after a
// sync pass the same scan succeeds and reflects the write.
ScenarioResult scenario_stale_read();

}  // namespace griffin::harness

#endif  // GRIFFIN_HARNESS_SCENARIOS_HPP_
