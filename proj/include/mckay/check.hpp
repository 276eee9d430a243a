#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace mckay {

// One named verdict with a human-readable datum, as it appears in reports.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

using CheckList = std::vector<Check>;

inline bool all_pass(const CheckList& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace mckay
