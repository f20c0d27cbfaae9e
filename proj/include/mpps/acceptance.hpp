#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpps {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0x5eed2024;
};

inline constexpr int kCriterionCount = 9;

// Runs criterion `id` (1-based). Exceptions are caught and reported as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

}  // namespace mpps
