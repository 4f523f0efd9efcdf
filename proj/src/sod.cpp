#include <algorithm>
#include <cmath>

#include "shocklab/solver.hpp"

namespace shocklab {

SodResult sod_verification(int cells, double t_end, const FluxScheme& scheme, double cfl, TimeScheme time,
                           const ShockTube& tube, const GasModel& gas) {
  if (cells < 10) throw std::invalid_argument("shock tube needs at least 10 cells");
  if (!(t_end >= 0.0)) throw std::invalid_argument("end time must be non-negative");

  BoxSpec box;
  box.nx = cells;
  box.ny = 1;
  box.lx = 1.0;
  box.ly = 1.0 / cells;
  box.tags = {BoundaryTag::symmetry, BoundaryTag::outflow, BoundaryTag::symmetry, BoundaryTag::outflow};
  const Mesh mesh = generate_box(box);

  CaseConfig cfg;
  cfg.mach = 1.0;  // unused: the strip has no inflow faces
  cfg.gas = gas;
  cfg.scheme = scheme;
  cfg.order = 1;
  cfg.cfl = cfl;
  Solver solver(mesh, cfg);

  SolutionField sol;
  sol.resize(mesh.num_volumes());
  for (int i = 0; i < mesh.num_volumes(); ++i) {
    const Primitive1D& s = mesh.volumes[i].centroid.x < tube.x_diaphragm ? tube.left : tube.right;
    sol.set(i, to_conserved({s.rho, s.u, 0.0, s.p}, gas));
  }

  SodResult res;
  const double dx = 1.0 / cells;
  double t = 0.0;
  double courant = cfl;
  int reductions = 0, clean = 0;
  std::vector<double> dt;
  while (t < t_end && t_end - t > 1e-14 * t_end) {
    // One-dimensional Courant condition on the strip width dx.
    double speed = 0.0;
    for (int i = 0; i < sol.size(); ++i) {
      const Primitive q = to_primitive(sol.at(i), gas, i);
      speed = std::max(speed, std::abs(q.u) + sound_speed(q, gas));
    }
    const double step = std::min(courant * dx / speed, t_end - t);
    dt.assign(sol.size(), step);
    const bool ok = time == TimeScheme::forward_euler ? solver.try_euler_step(sol, dt) : solver.try_step(sol, dt);
    if (!ok) {
      // Same back-off policy as the steady solver: halve up to five times.
      if (reductions == 5) throw PositivityError("shock tube run lost positivity");
      courant *= 0.5;
      ++reductions;
      ++res.cfl_reductions;
      clean = 0;
      continue;
    }
    t += step;
    ++res.steps;
    if (reductions > 0 && ++clean >= 100) {
      courant = cfl;
      reductions = 0;
      clean = 0;
    }
  }

  const RiemannStar star = exact_riemann_star(tube.left, tube.right, gas);
  for (int i = 0; i < mesh.num_volumes(); ++i) {
    const double x = mesh.volumes[i].centroid.x;
    double exact;
    if (t_end == 0.0) exact = (x < tube.x_diaphragm ? tube.left : tube.right).rho;
    else exact = sample_riemann(tube.left, tube.right, star, (x - tube.x_diaphragm) / t_end, gas).rho;
    res.x.push_back(x);
    res.rho.push_back(sol.u[0][i]);
    res.l1_error += std::abs(sol.u[0][i] - exact) * dx;
  }
  return res;
}

}  // namespace shocklab
