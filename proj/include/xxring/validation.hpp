#pragma once

// Self-check suite run by `xxring validate`: every closed form against the
// numeric path, the symmetry and limit invariants, and the reported
// phase-structure features of the four-site ring.

#include <cstdint>
#include <string>
#include <vector>

namespace xxring {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 7;
  int draws = 0;  // 0 keeps each check's default sample count
  bool quick = false;
  int threads = 1;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace xxring
