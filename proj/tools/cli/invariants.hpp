#pragma once

// The verify suite: named invariants, each reduced to "measured <= tolerance".

#include <string>
#include <vector>

#include "config.hpp"
#include "tpb/spectral_field.hpp"

namespace tpb::cli {

struct InvariantResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Names in report order.
const std::vector<std::string>& invariant_names();
double default_tolerance(const std::string& name);

/// Runs every invariant for the configured forcing, spreading independent
/// checks over `workers` threads. Results follow invariant_names().
std::vector<InvariantResult> run_invariant_suite(const RunConfig& cfg, int workers);

}  // namespace tpb::cli
