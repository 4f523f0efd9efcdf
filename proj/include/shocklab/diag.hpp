#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shocklab/mesh.hpp"
#include "shocklab/solver.hpp"

namespace shocklab {

class DiagError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// partner[i] is the volume whose centroid is the mirror image of volume i's about y = 0.
/// Throws DiagError when some volume has no mirror partner.
std::vector<int> mirror_pairs(const Mesh& mesh);

/// max |p_i - p_mirror(i)| / max(p). Zero for an exactly mirrored field.
double asymmetry_metric(const Mesh& mesh, std::span<const double> pressure);
double asymmetry_metric(const Mesh& mesh, const SolutionField& sol, const GasModel& gas);

/// Raggedness of the captured bow shock on an O-grid (instability proxy). Per angular bin the
/// shock radius is the |grad p|-weighted radius of the volumes whose inward-rising pressure
/// gradient is at least half of the bin maximum; the result is the standard deviation of the
/// second differences of that radius over angle, divided by the mean radial extent of the
/// volumes holding the bin maxima. Empty when the pressure never exceeds twice freestream.
std::optional<double> shock_front_roughness(const Mesh& mesh, std::span<const double> pressure,
                                            double freestream_pressure);
std::optional<double> shock_front_roughness(const Mesh& mesh, const SolutionField& sol, const GasModel& gas,
                                            double freestream_pressure);

/// Shock radius per angular bin (NaN where no shock was found), exposed for inspection.
std::vector<double> shock_radii(const Mesh& mesh, std::span<const double> pressure, double freestream_pressure);

struct ScalarField {
  std::string name;
  std::vector<double> values;  // one per control volume
};

/// Legacy ASCII VTK unstructured grid with one polygon per control volume and cell data
/// rho, u, v, p, Mach followed by `extra` fields.
void export_vtk(const Mesh& mesh, const SolutionField& sol, const GasModel& gas,
                std::span<const ScalarField> extra, const std::filesystem::path& path);

/// CSV with header `iteration,residual`.
void export_history(const ResidualHistory& history, const std::filesystem::path& path);

struct DiagnosticsReport {
  std::optional<double> asymmetry;       // empty for meshes without mirror pairing
  std::optional<double> shock_roughness;  // empty when no shock was detected
  double residual_drop_orders = 0.0;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double final_residual = 1.0;
  long long limiter_fallbacks = 0;
  int cfl_reductions = 0;
};

DiagnosticsReport make_report(const Mesh& mesh, const SolutionField& sol, const ResidualHistory& history,
                              bool converged, const SolverCounters& counters, const GasModel& gas,
                              double freestream_pressure);

/// Flat JSON object holding `config` entries (as strings) followed by the report fields.
void write_run_report(const DiagnosticsReport& report,
                      const std::vector<std::pair<std::string, std::string>>& config,
                      const std::filesystem::path& path);

/// Volume-averaged indicator weight (minimum over the volume's faces) for output.
std::vector<double> volume_indicator(const Mesh& mesh, std::span<const double> pressure,
                                     const IndicatorOptions& opts);

}  // namespace shocklab
