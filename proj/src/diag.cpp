#include "shocklab/diag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>

#include "json.hpp"

namespace shocklab {

std::vector<int> mirror_pairs(const Mesh& mesh) {
  const int nv = mesh.num_volumes();
  double extent = 0.0;
  for (const auto& n : mesh.nodes) extent = std::max({extent, std::abs(n.x), std::abs(n.y)});
  const double tol = 1e-9 * std::max(extent, 1.0);

  using Key = std::pair<long long, long long>;
  std::map<Key, std::vector<int>> buckets;
  auto key_of = [tol](Vec2 c) { return Key{std::llround(c.x / tol), std::llround(c.y / tol)}; };
  for (int i = 0; i < nv; ++i) buckets[key_of(mesh.volumes[i].centroid)].push_back(i);

  std::vector<int> partner(nv, -1);
  for (int i = 0; i < nv; ++i) {
    const Vec2 c = mesh.volumes[i].centroid;
    const Vec2 m{c.x, -c.y};
    const Key k = key_of(m);
    int best = -1;
    double best_d = 2.0 * tol;
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find({k.first + dx, k.second + dy});
        if (it == buckets.end()) continue;
        for (int j : it->second) {
          const double d = norm(mesh.volumes[j].centroid - m);
          if (d < best_d) {
            best_d = d;
            best = j;
          }
        }
      }
    if (best < 0) throw DiagError("mesh is not mirror-symmetric about y = 0: volume " + std::to_string(i) +
                                  " has no partner");
    partner[i] = best;
  }
  for (int i = 0; i < nv; ++i)
    if (partner[partner[i]] != i)
      throw DiagError("mesh is not mirror-symmetric about y = 0: ambiguous pairing at volume " +
                      std::to_string(i));
  return partner;
}

double asymmetry_metric(const Mesh& mesh, std::span<const double> pressure) {
  const std::vector<int> partner = mirror_pairs(mesh);
  const double p_max = *std::max_element(pressure.begin(), pressure.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < partner.size(); ++i)
    worst = std::max(worst, std::abs(pressure[i] - pressure[partner[i]]));
  return worst / p_max;
}

namespace {

std::vector<double> pressures(const SolutionField& sol, const GasModel& gas) {
  std::vector<double> p(sol.size());
  for (int i = 0; i < sol.size(); ++i) p[i] = to_primitive(sol.at(i), gas, i).p;
  return p;
}

struct BinSample {
  double radius = std::numeric_limits<double>::quiet_NaN();
  double extent = 0.0;
};

std::vector<BinSample> bin_samples(const Mesh& mesh, std::span<const double> pressure, double p_inf) {
  if (!mesh.ogrid) throw DiagError("shock roughness needs an O-grid mesh");
  const int n_circ = mesh.ogrid->params.n_circumferential;
  const double width = std::numbers::pi / n_circ;
  const int n_bins = mesh.vertex_centered ? n_circ + 1 : n_circ;
  const int nv = mesh.num_volumes();

  const std::vector<Vec2> grad = compute_gradients(mesh, pressure);
  std::vector<int> bin(nv);
  std::vector<double> radius(nv);
  for (int i = 0; i < nv; ++i) {
    const Vec2 c = mesh.volumes[i].centroid;
    const double phi = std::atan2(c.y, -c.x) + 0.5 * std::numbers::pi;
    const long long b = mesh.vertex_centered ? std::llround(phi / width) : static_cast<long long>(std::floor(phi / width));
    bin[i] = static_cast<int>(std::clamp<long long>(b, 0, n_bins - 1));
    radius[i] = norm(c);
  }

  struct Acc {
    double p_max = -std::numeric_limits<double>::infinity();
    double g_max = 0.0;
    int arg = -1;
  };
  std::vector<Acc> acc(n_bins);
  auto inward = [&](int i) { return dot(grad[i], mesh.volumes[i].centroid) < 0.0; };
  for (int i = 0; i < nv; ++i) {
    Acc& a = acc[bin[i]];
    a.p_max = std::max(a.p_max, pressure[i]);
    const double g = norm(grad[i]);
    if (inward(i) && g > a.g_max) {
      a.g_max = g;
      a.arg = i;
    }
  }
  std::vector<double> wsum(n_bins, 0.0), rsum(n_bins, 0.0);
  for (int i = 0; i < nv; ++i) {
    const Acc& a = acc[bin[i]];
    const double g = norm(grad[i]);
    if (a.arg < 0 || !inward(i) || g <= 0.5 * a.g_max) continue;
    // Weights vanish at the threshold, so volumes enter the estimate continuously.
    const double w = g - 0.5 * a.g_max;
    wsum[bin[i]] += w;
    rsum[bin[i]] += w * radius[i];
  }

  std::vector<BinSample> out(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    const Acc& a = acc[b];
    if (a.arg < 0 || !(a.p_max > 2.0 * p_inf) || !(wsum[b] > 0.0)) continue;
    out[b].radius = rsum[b] / wsum[b];
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int n : mesh.polygons[a.arg]) {
      const double r = norm(mesh.nodes[n]);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out[b].extent = hi - lo;
  }
  return out;
}

}  // namespace

double asymmetry_metric(const Mesh& mesh, const SolutionField& sol, const GasModel& gas) {
  const std::vector<double> p = pressures(sol, gas);
  return asymmetry_metric(mesh, p);
}

std::vector<double> shock_radii(const Mesh& mesh, std::span<const double> pressure, double freestream_pressure) {
  std::vector<double> r;
  for (const BinSample& s : bin_samples(mesh, pressure, freestream_pressure)) r.push_back(s.radius);
  return r;
}

std::optional<double> shock_front_roughness(const Mesh& mesh, std::span<const double> pressure,
                                            double freestream_pressure) {
  if (pressure.empty()) return std::nullopt;
  const double p_max = *std::max_element(pressure.begin(), pressure.end());
  if (!(p_max > 2.0 * freestream_pressure)) return std::nullopt;

  const std::vector<BinSample> bins = bin_samples(mesh, pressure, freestream_pressure);
  // Longest run of consecutive bins with a detected shock.
  int best_begin = 0, best_len = 0;
  for (int b = 0; b < static_cast<int>(bins.size());) {
    if (std::isnan(bins[b].radius)) {
      ++b;
      continue;
    }
    int e = b;
    while (e < static_cast<int>(bins.size()) && !std::isnan(bins[e].radius)) ++e;
    if (e - b > best_len) {
      best_len = e - b;
      best_begin = b;
    }
    b = e;
  }
  if (best_len < 3) return std::nullopt;

  std::vector<double> d2;
  double extent = 0.0;
  for (int b = best_begin; b < best_begin + best_len; ++b) {
    extent += bins[b].extent;
    if (b > best_begin && b + 1 < best_begin + best_len)
      d2.push_back(bins[b + 1].radius - 2.0 * bins[b].radius + bins[b - 1].radius);
  }
  extent /= best_len;
  double mean = 0.0;
  for (double d : d2) mean += d;
  mean /= static_cast<double>(d2.size());
  double var = 0.0;
  for (double d : d2) var += (d - mean) * (d - mean);
  var /= static_cast<double>(d2.size());
  return std::sqrt(var) / extent;
}

std::optional<double> shock_front_roughness(const Mesh& mesh, const SolutionField& sol, const GasModel& gas,
                                            double freestream_pressure) {
  const std::vector<double> p = pressures(sol, gas);
  return shock_front_roughness(mesh, p, freestream_pressure);
}

void export_vtk(const Mesh& mesh, const SolutionField& sol, const GasModel& gas,
                std::span<const ScalarField> extra, const std::filesystem::path& path) {
  const int nv = mesh.num_volumes();
  for (const ScalarField& f : extra)
    if (static_cast<int>(f.values.size()) != nv)
      throw std::invalid_argument("field '" + f.name + "' does not have one value per control volume");

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.precision(12);
  out << "# vtk DataFile Version 3.0\nshocklab solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const Vec2& n : mesh.nodes) out << n.x << ' ' << n.y << " 0\n";
  std::size_t total = 0;
  for (const auto& poly : mesh.polygons) total += poly.size() + 1;
  out << "CELLS " << nv << ' ' << total << '\n';
  for (const auto& poly : mesh.polygons) {
    out << poly.size();
    for (int n : poly) out << ' ' << n;
    out << '\n';
  }
  out << "CELL_TYPES " << nv << '\n';
  for (int i = 0; i < nv; ++i) out << "7\n";

  std::vector<Primitive> prim(nv);
  for (int i = 0; i < nv; ++i) prim[i] = to_primitive(sol.at(i), gas, i);
  out << "CELL_DATA " << nv << '\n';
  auto write_field = [&](const std::string& name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nv; ++i) out << value(i) << '\n';
  };
  write_field("rho", [&](int i) { return prim[i].rho; });
  write_field("u", [&](int i) { return prim[i].u; });
  write_field("v", [&](int i) { return prim[i].v; });
  write_field("p", [&](int i) { return prim[i].p; });
  write_field("Mach", [&](int i) { return std::hypot(prim[i].u, prim[i].v) / sound_speed(prim[i], gas); });
  for (const ScalarField& f : extra) write_field(f.name, [&](int i) { return f.values[i]; });
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void export_history(const ResidualHistory& history, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  std::fprintf(f, "iteration,residual\n");
  for (const auto& e : history.entries) std::fprintf(f, "%d,%.8e\n", e.iteration, e.residual);
  const bool ok = std::fclose(f) == 0;
  if (!ok) throw std::runtime_error("failed writing " + path.string());
}

DiagnosticsReport make_report(const Mesh& mesh, const SolutionField& sol, const ResidualHistory& history,
                              bool converged, const SolverCounters& counters, const GasModel& gas,
                              double freestream_pressure) {
  DiagnosticsReport rep;
  const std::vector<double> p = pressures(sol, gas);
  try {
    rep.asymmetry = asymmetry_metric(mesh, p);
  } catch (const DiagError&) {
  }
  if (mesh.ogrid) rep.shock_roughness = shock_front_roughness(mesh, p, freestream_pressure);
  rep.converged = converged;
  if (!history.entries.empty()) {
    rep.iterations = history.entries.back().iteration;
    rep.final_residual = history.entries.back().residual;
    rep.residual_drop_orders = rep.final_residual > 0.0 ? -std::log10(rep.final_residual)
                                                        : std::numeric_limits<double>::infinity();
  }
  rep.limiter_fallbacks = counters.limiter_fallbacks;
  rep.cfl_reductions = counters.cfl_reductions;
  return rep;
}

void write_run_report(const DiagnosticsReport& report,
                      const std::vector<std::pair<std::string, std::string>>& config,
                      const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : config) j[k] = v;
  auto optional_number = [](const std::optional<double>& x) {
    return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
  };
  j["asymmetry"] = optional_number(report.asymmetry);
  j["shock_roughness"] = optional_number(report.shock_roughness);
  j["metrics_note"] = "asymmetry and shock_roughness are solver-defined instability proxies";
  j["residual_drop_orders"] = std::isfinite(report.residual_drop_orders)
                                  ? nlohmann::ordered_json(report.residual_drop_orders)
                                  : nlohmann::ordered_json("inf");
  j["converged"] = report.converged;
  j["diverged"] = report.diverged;
  j["iterations"] = report.iterations;
  j["final_residual"] = report.final_residual;
  j["limiter_fallbacks"] = report.limiter_fallbacks;
  j["cfl_reductions"] = report.cfl_reductions;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

std::vector<double> volume_indicator(const Mesh& mesh, std::span<const double> pressure,
                                     const IndicatorOptions& opts) {
  const std::vector<double> ratios = face_ratios(mesh, pressure, opts);
  return volume_min_ratio(mesh, ratios);
}

}  // namespace shocklab
