#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tomaslab/config.hpp"
#include "tomaslab/measure_lab.hpp"
#include "tomaslab/report.hpp"

namespace tomaslab {

struct RunResult {
  ReportTable table;
  bool passed = false;
  std::vector<std::string> verdict_lines;
  std::vector<ReportTable> extra_tables;  ///< written as <subcommand>_<i>.csv
};

/// Measure selected by kind, dimension, atoms, ratio, levels and file.
DiscreteMeasure build_measure(const ExperimentConfig& config);

/// Computes without touching the filesystem; resolves `auto` parameters in place.
RunResult compute_experiment(ExperimentConfig& config);

/// Writes <out>/<subcommand>.csv and <out>/<subcommand>_verdict.txt (verdict,
/// summary lines, config echo).
void write_run(const ExperimentConfig& config, const RunResult& result);

/// Full run with exit status: 0 pass, 1 fail, 2 invalid configuration.
int run_experiment(ExperimentConfig& config, std::ostream& log);

struct LorentzSuiteResult {
  int fields = 0;
  double max_lp_error = 0.0;         ///< relative, L^{p,p} against a direct L^p sum
  double max_indicator_error = 0.0;  ///< relative, against (p/s)^{1/s} m^{1/p}
  int homogeneity_mismatches = 0;    ///< scalars +-2^k and +-i 2^k
  int rearrangement_mismatches = 0;  ///< random permutations
  ReportTable table;
};

LorentzSuiteResult lorentz_suite(int fields, int max_cells, std::uint64_t seed);

}  // namespace tomaslab
