#pragma once

#include <span>
#include <vector>

#include "shocklab/mesh.hpp"

namespace shocklab {

/// Pressure-based shock indicator. Each face gets the two-sided pressure ratio
/// f = min(p+/p-, p-/p+); a face's weight omega is the minimum f over every face of its two
/// adjacent control volumes. omega is 1 in smooth flow and tends to 0 across strong shocks.
struct IndicatorOptions {
  double freestream_pressure = 1.0;  // ghost pressure at inflow faces
  double exponent = 1.0;             // f is raised to this power; 1 leaves the ratio raw
};

double face_pressure_ratio(double p_plus, double p_minus);

/// Pressure seen across a boundary face: walls, symmetry and outflow copy the interior value.
double ghost_pressure(BoundaryTag tag, double interior, const IndicatorOptions& opts);

/// Ratio f for every face.
std::vector<double> face_ratios(const Mesh& mesh, std::span<const double> pressures,
                                const IndicatorOptions& opts = {});

/// Minimum face ratio over each control volume's own faces.
std::vector<double> volume_min_ratio(const Mesh& mesh, std::span<const double> ratios);

/// omega for one face, evaluated directly from its stencil.
double stencil_weight(int face, const Mesh& mesh, std::span<const double> pressures,
                      const IndicatorOptions& opts = {});

/// omega for every face (boundary faces use the stencil of their single volume).
std::vector<double> face_weights(const Mesh& mesh, std::span<const double> pressures,
                                 const IndicatorOptions& opts = {});
void face_weights(const Mesh& mesh, std::span<const double> pressures, const IndicatorOptions& opts,
                  std::vector<double>& ratios, std::vector<double>& volume_min, std::vector<double>& omega);

}  // namespace shocklab
