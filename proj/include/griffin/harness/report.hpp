#ifndef GRIFFIN_HARNESS_REPORT_HPP_
#define GRIFFIN_HARNESS_REPORT_HPP_

#include <string>

#include "griffin/harness/workload.hpp"

namespace griffin::harness {

// Machine-readable report with full per-run counters; parses back with
// bench_from_json.
std::string bench_to_json(const BenchResult& r);

// One header line plus one row per run.
std::string bench_to_csv(const BenchResult& r);

// Human-oriented summary.
std::string bench_to_text(const BenchResult& r);

// Returns false (and leaves *out untouched) when the document is not a
// report produced by bench_to_json.
bool bench_from_json(const std::string& text, BenchResult* out);

}  // namespace griffin::harness

#endif  // GRIFFIN_HARNESS_REPORT_HPP_
