#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "shocklab/config.hpp"

namespace shocklab {

/// Command-line settings that take precedence over the config file.
struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<bool> deterministic;
  std::optional<int> threads;
};

void apply_overrides(CaseConfig& cfg, const Overrides& o);

struct RunOutputs {
  std::filesystem::path vtk, history, report;
};
RunOutputs output_paths(const CaseConfig& cfg);

/// Runs one case and writes its outputs. Exit codes: 0 completed (converged or capped),
/// 2 configuration error, 3 divergence.
int cmd_run(const std::filesystem::path& config, const Overrides& o, std::ostream& log, std::ostream& err);

/// Runs every case of a sweep and writes `<out>/sweep_report.csv`; failed cases are recorded in
/// their row and do not stop the sweep.
int cmd_sweep(const std::filesystem::path& config, const Overrides& o, std::ostream& log, std::ostream& err);

/// Shock tube at `cells` and 2*`cells`; prints both L1 errors and the observed order.
int cmd_sod(int cells, Scheme scheme, std::ostream& log, std::ostream& err);

/// Writes the primal mesh described by the config.
int cmd_mesh(const std::filesystem::path& config, const std::filesystem::path& out, std::ostream& log,
             std::ostream& err);

}  // namespace shocklab
