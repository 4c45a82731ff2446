#pragma once

#include <optional>
#include <string>
#include <vector>

#include "perctree/recurrence.hpp"

namespace perctree {

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;  // failure explanation, empty on pass
  double millis = 0.0;
};

struct VerifyOptions {
  std::optional<std::string> only_group;
  IterationControl iteration{};  // debug injection point for eps_fp / cap
  int jobs = 1;
};

/// Built-in oracle suite: tangency values, the two reference root counts,
/// enumeration-vs-recurrence identities, sandwich and monotonicity grids.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

}  // namespace perctree
