#include "shocklab/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shocklab/euler.hpp"

namespace shocklab {

double face_pressure_ratio(double p_plus, double p_minus) {
  if (!(p_plus > 0.0) || !(p_minus > 0.0)) throw PositivityError("pressure ratio needs positive pressures");
  return std::min(p_plus / p_minus, p_minus / p_plus);
}

double ghost_pressure(BoundaryTag tag, double interior, const IndicatorOptions& opts) {
  return tag == BoundaryTag::inflow ? opts.freestream_pressure : interior;
}

namespace {

double ratio_at(const Mesh& mesh, int fi, std::span<const double> p, const IndicatorOptions& opts) {
  const Face& f = mesh.faces[fi];
  const double pl = p[f.left];
  const double pr = f.is_boundary() ? ghost_pressure(f.tag, pl, opts) : p[f.right];
  const double r = face_pressure_ratio(pl, pr);
  return opts.exponent == 1.0 ? r : std::pow(r, opts.exponent);
}

}  // namespace

std::vector<double> face_ratios(const Mesh& mesh, std::span<const double> pressures,
                                const IndicatorOptions& opts) {
  std::vector<double> out(mesh.num_faces());
  for (int fi = 0; fi < mesh.num_faces(); ++fi) out[fi] = ratio_at(mesh, fi, pressures, opts);
  return out;
}

std::vector<double> volume_min_ratio(const Mesh& mesh, std::span<const double> ratios) {
  std::vector<double> out(mesh.num_volumes(), 1.0);
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    out[f.left] = std::min(out[f.left], ratios[fi]);
    if (!f.is_boundary()) out[f.right] = std::min(out[f.right], ratios[fi]);
  }
  return out;
}

double stencil_weight(int face, const Mesh& mesh, std::span<const double> pressures,
                      const IndicatorOptions& opts) {
  const Face& f = mesh.faces.at(face);
  double omega = std::numeric_limits<double>::infinity();
  for (int g : mesh.faces_of(f.left)) omega = std::min(omega, ratio_at(mesh, g, pressures, opts));
  if (!f.is_boundary())
    for (int g : mesh.faces_of(f.right)) omega = std::min(omega, ratio_at(mesh, g, pressures, opts));
  return omega;
}

void face_weights(const Mesh& mesh, std::span<const double> pressures, const IndicatorOptions& opts,
                  std::vector<double>& ratios, std::vector<double>& volume_min, std::vector<double>& omega) {
  const int nf = mesh.num_faces();
  ratios.resize(nf);
  for (int fi = 0; fi < nf; ++fi) ratios[fi] = ratio_at(mesh, fi, pressures, opts);
  volume_min.assign(mesh.num_volumes(), 1.0);
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[fi];
    volume_min[f.left] = std::min(volume_min[f.left], ratios[fi]);
    if (!f.is_boundary()) volume_min[f.right] = std::min(volume_min[f.right], ratios[fi]);
  }
  omega.resize(nf);
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[fi];
    omega[fi] = f.is_boundary() ? volume_min[f.left] : std::min(volume_min[f.left], volume_min[f.right]);
  }
}

std::vector<double> face_weights(const Mesh& mesh, std::span<const double> pressures,
                                 const IndicatorOptions& opts) {
  std::vector<double> ratios, vmin, omega;
  face_weights(mesh, pressures, opts, ratios, vmin, omega);
  return omega;
}

}  // namespace shocklab
