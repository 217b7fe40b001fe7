#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace modalwb {

struct VerifyResult {
  // (criterion description, passed), in fixed order 1..11
  std::vector<std::pair<std::string, bool>> criteria;

  bool all_pass() const {
    for (const auto& [_, ok] : criteria)
      if (!ok) return false;
    return true;
  }
};

// Runs the full acceptance suite, printing one PASS/FAIL line per criterion.
// jobs: worker count for the campaign criteria (0 = all hardware threads).
VerifyResult verify_all(std::ostream& out, int jobs);

} // namespace modalwb
