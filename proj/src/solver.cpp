#include "shocklab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "shocklab/kernels.hpp"

namespace shocklab {

std::string_view to_string(Discretization d) { return d == Discretization::cell ? "cell" : "vertex"; }

Discretization discretization_from_string(std::string_view s) {
  if (s == "cell") return Discretization::cell;
  if (s == "vertex") return Discretization::vertex;
  throw ConfigError("unknown discretization '" + std::string(s) + "' (expected cell or vertex)");
}

void validate(const CaseConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(cfg.mach > 0.0)) fail("mach must be positive");
  try {
    validate(cfg.gas);
    validate(cfg.scheme);
    validate(cfg.limiter);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (cfg.order != 1 && cfg.order != 2) fail("order must be 1 or 2");
  if (!(cfg.cfl > 0.0)) fail("cfl must be positive");
  if (cfg.max_iters < 1) fail("max_iters must be at least 1");
  if (!(cfg.residual_tol > 0.0)) fail("residual_tol must be positive");
  if (!(cfg.indicator_exponent > 0.0)) fail("indicator_exponent must be positive");
  if (cfg.threads < 1) fail("threads must be at least 1");
  if (cfg.mesh_file.empty()) {
    const GridParams& g = cfg.grid;
    if (g.n_radial < 2 || g.n_circumferential < 2) fail("grid needs at least 2 radial and 2 circumferential cells");
    if (!(g.r_cylinder > 0.0) || !(g.r_outer > g.r_cylinder)) fail("grid radii must satisfy 0 < r_cylinder < r_outer");
  }
}

Mesh build_mesh(const CaseConfig& cfg) {
  Mesh primal = cfg.mesh_file.empty() ? generate_grid(cfg.grid_kind, cfg.grid) : read_mesh(cfg.mesh_file);
  if (cfg.discretization == Discretization::vertex) return build_median_dual(primal);
  return primal;
}

SolutionField uniform_solution(const Mesh& mesh, const Primitive& state, const GasModel& gas) {
  SolutionField sol;
  sol.resize(mesh.num_volumes());
  const Conserved c = to_conserved(state, gas);
  for (int i = 0; i < mesh.num_volumes(); ++i) sol.set(i, c);
  return sol;
}

PrimitiveField primitives(const SolutionField& sol, const GasModel& gas) {
  PrimitiveField p;
  p.resize(sol.size());
  for (int i = 0; i < sol.size(); ++i) p.set(i, to_primitive(sol.at(i), gas, i));
  return p;
}

Primitive ghost_state(const Face& face, const Primitive& interior, const Primitive& freestream) {
  switch (face.tag) {
    case BoundaryTag::inflow: return freestream;
    case BoundaryTag::outflow: return interior;
    case BoundaryTag::wall:
    case BoundaryTag::symmetry: {
      const double un = interior.u * face.normal.x + interior.v * face.normal.y;
      return {interior.rho, interior.u - 2.0 * un * face.normal.x, interior.v - 2.0 * un * face.normal.y,
              interior.p};
    }
    case BoundaryTag::interior: break;
  }
  throw ConfigError("boundary face without a boundary condition");
}

PrimitiveField apply_boundary(const Mesh& mesh, const SolutionField& sol, const CaseConfig& cfg) {
  const Primitive inf = freestream(cfg.mach, cfg.gas);
  PrimitiveField g;
  g.resize(mesh.num_faces());
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    if (!f.is_boundary()) continue;
    g.set(fi, ghost_state(f, to_primitive(sol.at(f.left), cfg.gas, f.left), inf));
  }
  return g;
}

namespace {

// Runs fn(i) for i in [0, n), possibly on several threads; rethrows the first exception.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  std::exception_ptr error;
#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(shocklab_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

bool admissible(const SolutionField& s, const GasModel& gas) {
  const int n = s.size();
  for (int i = 0; i < n; ++i) {
    const double rho = s.u[0][i];
    const double ke = 0.5 * (s.u[1][i] * s.u[1][i] + s.u[2][i] * s.u[2][i]) / rho;
    const double p = (gas.gamma - 1.0) * (s.u[3][i] - ke);
    if (!(rho > 0.0) || !(p > 0.0) || !std::isfinite(p)) return false;
  }
  return true;
}

void resize_residual(ResidualField& r, int n) {
  for (auto& c : r) c.resize(n);
}

}  // namespace

// ---------------------------------------------------------------------------------------------

Solver::Solver(const Mesh& mesh, const CaseConfig& cfg)
    : mesh_(&mesh), cfg_(cfg), inf_(freestream(cfg.mach, cfg.gas)), cfl_(cfg.cfl) {
  validate(cfg_);
  indicator_.freestream_pressure = inf_.p;
  indicator_.exponent = cfg_.indicator_exponent;
  if (cfg_.order == 2) {
    gradient_.emplace(mesh, true);
    limiter_.emplace(mesh);
  }
  const int nf = mesh.num_faces();
  nx_.resize(nf);
  ny_.resize(nf);
  for (int fi = 0; fi < nf; ++fi) {
    nx_[fi] = mesh.faces[fi].normal.x;
    ny_[fi] = mesh.faces[fi].normal.y;
  }
  for (auto& f : flux_) f.resize(nf);
  ghosts_.resize(nf);
}

void Solver::compute_residual(const SolutionField& sol, ResidualField& r) {
  const Mesh& mesh = *mesh_;
  const int nv = mesh.num_volumes();
  const int nf = mesh.num_faces();
  const GasModel& gas = cfg_.gas;

  prim_.resize(nv);
  parallel_for(nv, cfg_.threads, [&](int i) { prim_.set(i, to_primitive(sol.at(i), gas, i)); });

  const Scheme scheme = cfg_.scheme.scheme;
  const bool need_omega = is_hybrid(scheme);
  const bool pw_limiter = cfg_.order == 2 && cfg_.limiter.kind == LimiterKind::mlp_pw;
  if (need_omega) face_weights(mesh, prim_.q[3], indicator_, ratios_, volume_min_, omega_);
  else omega_.clear();

  auto ghost = [this](const Face& f, const Primitive& interior) { return ghost_state(f, interior, inf_); };

  if (cfg_.order == 2) {
    for (int fi = 0; fi < nf; ++fi) {
      const Face& f = mesh.faces[fi];
      if (f.is_boundary()) ghosts_.set(fi, ghost(f, prim_.at(f.left)));
    }
    for (int k = 0; k < 4; ++k) {
      grads_[k].resize(nv);
      gradient_->compute(prim_.q[k], ghosts_.q[k], grads_[k]);
    }
    if (pw_limiter) omega_cell_ = volume_pressure_weights(mesh, prim_.q[3], indicator_);
    limiter_->evaluate(cfg_.limiter, prim_, ghosts_, grads_, omega_cell_, phi_);
    reconstruct_face_states(mesh, prim_, &grads_, &phi_, ghost, states_);
    counters_.limiter_fallbacks += states_.fallbacks;
  } else {
    reconstruct_face_states(mesh, prim_, nullptr, nullptr, ghost, states_);
  }

  face_fluxes(states_.left, states_.right);
  gather(r);
}

void Solver::face_fluxes(const PrimitiveField& left, const PrimitiveField& right) {
  const Mesh& mesh = *mesh_;
  const int nf = mesh.num_faces();
  const GasModel& gas = cfg_.gas;
  const Scheme scheme = cfg_.scheme.scheme;

  if (scheme == Scheme::roe || scheme == Scheme::van_leer) {
    const kernels::FaceStates in{left.q[0], left.q[1], left.q[2], left.q[3], right.q[0], right.q[1],
                                 right.q[2], right.q[3], nx_, ny_};
    const kernels::FaceFluxes out{flux_[0], flux_[1], flux_[2], flux_[3]};
    if (scheme == Scheme::roe) {
      const double fix =
          cfg_.scheme.entropy_fix.kind == EntropyFix::Kind::harten ? cfg_.scheme.entropy_fix.delta : 0.0;
      const int bad = kernels::roe_flux(in, gas.gamma, fix, out);
      if (bad > 0) {
        counters_.roe_sonic_failures += bad;
        throw PositivityError("Roe-averaged sound speed is not real on " + std::to_string(bad) + " faces");
      }
    } else {
      kernels::van_leer_flux(in, gas.gamma, out);
    }
    for (int k = 0; k < 4; ++k)
      for (int fi = 0; fi < nf; ++fi) flux_[k][fi] *= mesh.faces[fi].length;
    return;
  }

  const bool hybrid = is_hybrid(scheme);
  parallel_for(nf, cfg_.threads, [&](int fi) {
    const Face& f = mesh.faces[fi];
    const double w = hybrid ? omega_[fi] : 1.0;
    FluxVector F;
    try {
      F = numerical_flux(cfg_.scheme, w, left.at(fi), right.at(fi), f.normal, gas);
    } catch (const PositivityError& e) {
      throw PositivityError(std::string(e.what()) + " at face " + std::to_string(fi));
    }
    for (int k = 0; k < 4; ++k) flux_[k][fi] = F[k] * f.length;
  });
}

void Solver::gather(ResidualField& r) const {
  const Mesh& mesh = *mesh_;
  const int nv = mesh.num_volumes();
  resize_residual(r, nv);
  if (cfg_.deterministic) {
    parallel_for(nv, cfg_.threads, [&](int v) {
      double acc[4] = {0.0, 0.0, 0.0, 0.0};
      for (int fi : mesh.faces_of(v)) {
        const bool out = mesh.faces[fi].left == v;
        for (int k = 0; k < 4; ++k) acc[k] += out ? -flux_[k][fi] : flux_[k][fi];
      }
      const double inv = 1.0 / mesh.volumes[v].area;
      for (int k = 0; k < 4; ++k) r[k][v] = acc[k] * inv;
    });
    return;
  }
  for (auto& c : r) std::fill(c.begin(), c.end(), 0.0);
  const int nf = mesh.num_faces();
  const int threads = cfg_.threads;
#pragma omp parallel for num_threads(threads) if (threads > 1) schedule(static)
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[fi];
    for (int k = 0; k < 4; ++k) {
#pragma omp atomic
      r[k][f.left] -= flux_[k][fi];
      if (!f.is_boundary()) {
#pragma omp atomic
        r[k][f.right] += flux_[k][fi];
      }
    }
  }
  for (int v = 0; v < nv; ++v) {
    const double inv = 1.0 / mesh.volumes[v].area;
    for (int k = 0; k < 4; ++k) r[k][v] *= inv;
  }
}

void Solver::local_time_step(const SolutionField& sol, double cfl, std::vector<double>& dt) {
  const Mesh& mesh = *mesh_;
  const int nv = mesh.num_volumes();
  const int nf = mesh.num_faces();
  const GasModel& gas = cfg_.gas;
  prim_.resize(nv);
  for (int i = 0; i < nv; ++i) prim_.set(i, to_primitive(sol.at(i), gas, i));

  spectral_.resize(nf);
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[fi];
    const Primitive l = prim_.at(f.left);
    const Primitive r = f.is_boundary() ? ghost_state(f, l, inf_) : prim_.at(f.right);
    const Primitive avg{0.5 * (l.rho + r.rho), 0.5 * (l.u + r.u), 0.5 * (l.v + r.v), 0.5 * (l.p + r.p)};
    spectral_[fi] = max_wave_speed(avg, f.normal, gas) * f.length;
  }
  dt.resize(nv);
  for (int v = 0; v < nv; ++v) {
    double s = 0.0;
    for (int fi : mesh.faces_of(v)) s += spectral_[fi];
    dt[v] = cfl * mesh.volumes[v].area / s;
  }
}

bool Solver::try_step(SolutionField& sol, const std::vector<double>& dt, const ResidualField* r0) {
  if (!r0) {
    compute_residual(sol, r_first_);
    r0 = &r_first_;
  }
  const int n = sol.size();
  stage_.resize(n);
  stage2_.resize(n);
  for (int k = 0; k < 4; ++k) kernels::rk_combine(stage_.u[k], sol.u[k], 0.0, sol.u[k], 1.0, (*r0)[k], dt);
  if (!admissible(stage_, cfg_.gas)) return false;
  try {
    compute_residual(stage_, r_stage_);
  } catch (const PositivityError&) {
    return false;
  }
  for (int k = 0; k < 4; ++k)
    kernels::rk_combine(stage2_.u[k], sol.u[k], 0.5, stage_.u[k], 0.5, r_stage_[k], dt);
  if (!admissible(stage2_, cfg_.gas)) return false;
  std::swap(sol.u, stage2_.u);
  return true;
}

bool Solver::try_euler_step(SolutionField& sol, const std::vector<double>& dt) {
  compute_residual(sol, r_first_);
  stage_.resize(sol.size());
  for (int k = 0; k < 4; ++k) kernels::rk_combine(stage_.u[k], sol.u[k], 0.0, sol.u[k], 1.0, r_first_[k], dt);
  if (!admissible(stage_, cfg_.gas)) return false;
  std::swap(sol.u, stage_.u);
  return true;
}

void Solver::advance(SolutionField& sol, const ResidualField* r0) {
  if (!r0) {
    compute_residual(sol, r_first_);
    r0 = &r_first_;
  }
  for (;;) {
    local_time_step(sol, cfl_, dt_);
    if (try_step(sol, dt_, r0)) break;
    if (active_reductions_ >= 5) {
      std::ostringstream os;
      os << "positivity lost at iteration " << sol.iteration + 1 << " even with cfl " << cfl_;
      throw DivergenceError(os.str(), sol, {});
    }
    cfl_ *= 0.5;
    ++active_reductions_;
    ++counters_.cfl_reductions;
    clean_steps_ = 0;
  }
  ++sol.iteration;
  if (active_reductions_ > 0 && ++clean_steps_ >= 100) {
    cfl_ = cfg_.cfl;
    active_reductions_ = 0;
    clean_steps_ = 0;
  }
}

// ---------------------------------------------------------------------------------------------

ResidualField compute_residual(const Mesh& mesh, const SolutionField& sol, const CaseConfig& cfg) {
  Solver s(mesh, cfg);
  ResidualField r;
  s.compute_residual(sol, r);
  return r;
}

std::vector<double> local_time_step(const Mesh& mesh, const SolutionField& sol, const CaseConfig& cfg,
                                    double cfl) {
  Solver s(mesh, cfg);
  std::vector<double> dt;
  s.local_time_step(sol, cfl, dt);
  return dt;
}

void advance(const Mesh& mesh, SolutionField& sol, const CaseConfig& cfg) {
  Solver s(mesh, cfg);
  s.advance(sol);
}

double density_residual_norm(const ResidualField& r) {
  const auto& x = r[0];
  if (x.empty()) return 0.0;
  return std::sqrt(kernels::sum_squares(x) / static_cast<double>(x.size()));
}

SteadyResult run_steady(const Mesh& mesh, const CaseConfig& cfg) {
  Solver solver(mesh, cfg);
  SteadyResult res;
  res.solution = uniform_solution(mesh, solver.freestream_state(), cfg.gas);
  SolutionField& sol = res.solution;

  // A residual this small relative to the freestream flux scale means the initial state is
  // already steady; normalizing by it would only amplify round-off.
  double mean_area = 0.0;
  for (const auto& cv : mesh.volumes) mean_area += cv.area;
  mean_area /= std::max(1, mesh.num_volumes());
  const Primitive& inf = solver.freestream_state();
  const double scale = inf.rho * (std::hypot(inf.u, inf.v) + sound_speed(inf, cfg.gas)) / std::sqrt(mean_area);

  ResidualField r;
  double r_initial = 0.0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    try {
      solver.compute_residual(sol, r);
    } catch (const PositivityError& e) {
      throw DivergenceError(e.what(), sol, res.history);
    }
    const double norm = density_residual_norm(r);
    if (!std::isfinite(norm)) throw DivergenceError("residual is not finite", sol, res.history);
    bool done = false;
    if (it == 1) {
      r_initial = norm;
      res.history.entries.push_back({1, 1.0});
      sol.residual = 1.0;
      done = norm <= 1e-12 * scale;
    } else {
      const double rel = norm / r_initial;
      res.history.entries.push_back({it, rel});
      sol.residual = rel;
      done = rel < cfg.residual_tol;
    }
    if (done) {
      res.converged = true;
      break;
    }
    try {
      solver.advance(sol, &r);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.what(), e.last_valid(), res.history);
    }
  }
  res.counters = solver.counters();
  return res;
}

SteadyResult run_steady(const CaseConfig& cfg) {
  validate(cfg);
  const Mesh mesh = build_mesh(cfg);
  return run_steady(mesh, cfg);
}

}  // namespace shocklab
