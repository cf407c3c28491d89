#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tomaslab/report.hpp"

namespace tomaslab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;  ///< one-line summary of the measured quantities
  double seconds = 0.0;
  ReportTable detail;    ///< deterministic data behind the verdict
};

struct AcceptanceSummary {
  std::vector<CriterionResult> criteria;
  bool all_passed = false;
};

/// Criteria 1-11 with pinned tolerances, each writing criterion_NN.csv under
/// `out`. Criterion 12 reruns them into out/rerun and compares the files
/// byte for byte. Prints one PASS/FAIL line per criterion and writes acceptance.csv.
AcceptanceSummary run_acceptance(const std::filesystem::path& out, std::uint64_t seed, bool rerun, std::ostream& log);

/// The individual criteria, in order.
std::vector<CriterionResult> compute_criteria(std::uint64_t seed, std::ostream* progress = nullptr);

}  // namespace tomaslab
