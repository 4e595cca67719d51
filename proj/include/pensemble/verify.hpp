#pragma once

#include <string>
#include <vector>

#include "pensemble/common.hpp"

namespace pens {

struct CheckResult {
  std::string criterion;  // short id, e.g. "fig2-ratio"
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::vector<std::string> info;  // supporting numbers, not pass/fail

  bool all_pass() const;
  std::string to_json() const;
};

/// Suites: invariants, oracle-small, gap-ratio, purity, haar-floor, fig2.
/// Each runs a pinned-configuration acceptance bundle and reports one
/// pass/fail entry per criterion. Unknown names throw std::invalid_argument.
VerifyReport verify(const std::string& suite, int n_threads = 0);

const std::vector<std::string>& verify_suite_names();

}  // namespace pens
