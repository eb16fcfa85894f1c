#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace skm_acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string measured;   // what was observed
  std::string tolerance;  // what was required
  double seconds = 0.0;
};

struct Options {
  /// When set, desk-run sample stores are cached here and reused on fingerprint match.
  std::filesystem::path store_dir;
  unsigned workers = 1;
  int trials = 200;
};

CriterionResult ac1_topology_identities();
CriterionResult ac2_vacuum_conservation();
CriterionResult ac3_rytov_triple();
CriterionResult ac4_geometry_constants();
CriterionResult ac5_structure_function();
CriterionResult ac6_capacity_solver();
CriterionResult ac10_property_suites();

/// AC7-AC9 share one desk-scale Monte Carlo run of the three turbulence levels.
std::vector<CriterionResult> desk_pipeline_criteria(const Options& options, std::ostream& log);

/// Every criterion in order; each line is printed to `out` as soon as it is known.
std::vector<CriterionResult> run_all(const Options& options, std::ostream& out, std::ostream& log);

std::string format_line(const CriterionResult& r);

}  // namespace skm_acceptance
