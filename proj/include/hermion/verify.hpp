#pragma once

#include <iosfwd>

#include "hermion/config.hpp"

namespace hermion {

struct CheckResult {
  std::string id;
  std::string claim;     // the mathematical statement being verified
  bool hard = true;      // hard checks gate the exit status
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string details;
  double seconds = 0.0;  // console only, never serialized
};

struct VerifyOptions {
  std::string only;         // run a single check id ("" = all)
  std::string report_path;  // "" → <output_dir>/verify_report.json
  int threads = 0;          // 0 → HERMION_THREADS or hardware
};

struct VerifyOutcome {
  std::vector<CheckResult> results;
  bool all_hard_passed = false;
  std::string report_json;  // canonical bytes written to the report file
};

// Registered check ids, in execution/report order.
std::vector<std::string> verify_check_ids();

// Runs the invariant suite; every check failure is caught and reported, the
// suite itself never aborts. Console gets one line per check (with timing);
// the report JSON is deterministic for a fixed config.
VerifyOutcome run_verify(const RunConfig& cfg, const VerifyOptions& opts,
                         std::ostream& console);

// Deterministic random fields (unit l2 norm by default) shared by the suite.
std::vector<HermiteField> standard_family(std::uint64_t seed, int count, int dim,
                                          int cutoff, double norm = 1.0);

// max trilinear_ratio over the family times a safety factor of 2; the pinned
// empirical stand-in for the contraction constant.
double measured_trilinear_constant(const RunConfig& cfg, const KernelSpec& kernel);

}  // namespace hermion
