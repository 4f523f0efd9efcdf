#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shocklab/solver.hpp"

namespace shocklab {

/// Cartesian product of experiment settings sharing one flow/run setup.
struct SweepSpec {
  CaseConfig base;
  std::vector<GridKind> grids;
  std::vector<Discretization> discretizations;
  std::vector<Scheme> schemes;
  std::vector<int> orders;
  std::vector<LimiterKind> limiters;
  std::vector<double> ks;
  std::string preset;  // "matrix" selects the built-in reference matrix instead of the lists
};

struct LabeledCase {
  std::string label;
  CaseConfig config;
};

/// Expands a sweep. First-order cases ignore the limiter lists, and K is only varied for
/// limiters that use it, so no two cases are identical.
std::vector<LabeledCase> expand(const SweepSpec& sweep);

/// The reference comparison matrix: Roe/van Leer on grid 1, AUSM+/SLAU on grids 2-3, the hybrids, the
/// vertex-centered Roe runs and the second-order limiter comparison.
std::vector<LabeledCase> reference_matrix(const CaseConfig& base);

/// Parses an INI file. A file is a sweep when it has a [sweep] section or a comma-separated
/// list in any sweepable key.
std::variant<CaseConfig, SweepSpec> parse_config(const std::filesystem::path& path);
std::variant<CaseConfig, SweepSpec> parse_config_string(const std::string& text);

CaseConfig parse_case(const std::filesystem::path& path);
SweepSpec parse_sweep(const std::filesystem::path& path);

/// Every documented key with its effective value, in `section.key` form.
std::vector<std::pair<std::string, std::string>> flatten(const CaseConfig& cfg);

/// INI text that parses back to the same configuration.
std::string dump_config(const CaseConfig& cfg);

std::string format_double(double x);

}  // namespace shocklab
