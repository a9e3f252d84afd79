#pragma once

// Seeded acceptance battery. Each criterion prints one PASS/FAIL line.

#include <cstdint>
#include <string>
#include <vector>

namespace hplab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240501;
  /// Every tolerance and threshold is divided by this factor.
  double tighten = 1;
  /// Criterion names or numbers to run; empty runs all.
  std::vector<std::string> only;
};

std::vector<std::string> criterion_names();

/// Throws InputError for an unknown name in `only`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

std::string format_result(const CriterionResult& r);

}  // namespace hplab
