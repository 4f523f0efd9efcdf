#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shocklab/euler.hpp"
#include "shocklab/flux.hpp"
#include "shocklab/indicator.hpp"
#include "shocklab/mesh.hpp"
#include "shocklab/recon.hpp"

namespace shocklab {

enum class Discretization { cell, vertex };

std::string_view to_string(Discretization d);
Discretization discretization_from_string(std::string_view s);

struct OutputOptions {
  std::filesystem::path dir = "out";
  std::string prefix = "case";
  bool vtk = true;
};

struct CaseConfig {
  double mach = 8.0;
  GasModel gas;
  GridKind grid_kind = GridKind::quad;
  GridParams grid;
  std::filesystem::path mesh_file;  // when set, the mesh is read instead of generated
  Discretization discretization = Discretization::cell;
  FluxScheme scheme;
  int order = 1;
  Limiter limiter;  // order 2 only; `none` means unlimited
  double indicator_exponent = 1.0;
  double cfl = 0.5;
  int max_iters = 50000;
  double residual_tol = 1e-8;
  bool deterministic = true;
  int threads = 1;
  OutputOptions output;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const CaseConfig& cfg);

/// Generates (or reads) the primal mesh and converts it to its median dual for vertex-centered
/// runs.
Mesh build_mesh(const CaseConfig& cfg);

/// Conserved variables per control volume in structure-of-arrays layout.
struct SolutionField {
  std::array<std::vector<double>, 4> u;  // rho, rho*u, rho*v, E
  int iteration = 0;
  double residual = 0.0;  // latest relative density residual

  void resize(int n) {
    for (auto& c : u) c.assign(n, 0.0);
  }
  int size() const { return static_cast<int>(u[0].size()); }
  Conserved at(int i) const { return {u[0][i], u[1][i], u[2][i], u[3][i]}; }
  void set(int i, const Conserved& c) {
    u[0][i] = c.rho;
    u[1][i] = c.mom_x;
    u[2][i] = c.mom_y;
    u[3][i] = c.energy;
  }
};

SolutionField uniform_solution(const Mesh& mesh, const Primitive& state, const GasModel& gas);
PrimitiveField primitives(const SolutionField& sol, const GasModel& gas);

struct ResidualHistory {
  struct Entry {
    int iteration = 0;
    double residual = 0.0;
  };
  std::vector<Entry> entries;
};

/// Raised when the state cannot be kept positive even at the smallest allowed CFL number.
/// Carries the last state that satisfied positivity and the history up to that point.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, SolutionField last_valid, ResidualHistory history)
      : std::runtime_error(what), last_valid_(std::move(last_valid)), history_(std::move(history)) {}
  const SolutionField& last_valid() const { return last_valid_; }
  const ResidualHistory& history() const { return history_; }

 private:
  SolutionField last_valid_;
  ResidualHistory history_;
};

/// Ghost state seen through a boundary face for the given interior state.
Primitive ghost_state(const Face& face, const Primitive& interior, const Primitive& freestream);

/// Ghost states for every face (only boundary entries are meaningful).
PrimitiveField apply_boundary(const Mesh& mesh, const SolutionField& sol, const CaseConfig& cfg);

/// Counters accumulated over a run.
struct SolverCounters {
  long long limiter_fallbacks = 0;  // faces reconstructed at first order for positivity
  int cfl_reductions = 0;
  int roe_sonic_failures = 0;
};

/// Per-volume residual R = -(1/V) sum F.n length, in structure-of-arrays layout.
using ResidualField = std::array<std::vector<double>, 4>;

/// Residual assembly and time integration on one mesh. Holds all scratch storage, so one
/// instance must not be shared between threads.
class Solver {
 public:
  Solver(const Mesh& mesh, const CaseConfig& cfg);

  const Mesh& mesh() const { return *mesh_; }
  const CaseConfig& config() const { return cfg_; }
  const Primitive& freestream_state() const { return inf_; }

  void compute_residual(const SolutionField& sol, ResidualField& r);
  void local_time_step(const SolutionField& sol, double cfl, std::vector<double>& dt);

  /// One SSP-RK2 step with per-volume step sizes. Returns false (leaving `sol` untouched) if
  /// either stage produced a non-positive state. `r0` is the residual of `sol` when known.
  bool try_step(SolutionField& sol, const std::vector<double>& dt, const ResidualField* r0 = nullptr);
  /// Single forward-Euler stage, otherwise like try_step.
  bool try_euler_step(SolutionField& sol, const std::vector<double>& dt);

  /// Local-time-stepping iteration with CFL back-off. Throws DivergenceError when positivity
  /// cannot be restored.
  void advance(SolutionField& sol, const ResidualField* r0 = nullptr);

  double current_cfl() const { return cfl_; }
  const SolverCounters& counters() const { return counters_; }

  /// Quantities from the most recent residual evaluation, for output.
  const std::vector<double>& face_omega() const { return omega_; }
  const std::array<std::vector<double>, 4>& limiter_phi() const { return phi_; }
  bool has_limiter_phi() const { return cfg_.order == 2; }

 private:
  void face_fluxes(const PrimitiveField& left, const PrimitiveField& right);
  void gather(ResidualField& r) const;

  const Mesh* mesh_;
  CaseConfig cfg_;
  Primitive inf_;
  IndicatorOptions indicator_;
  std::optional<GradientOperator> gradient_;
  std::optional<LimiterEvaluator> limiter_;

  PrimitiveField prim_, ghosts_;
  FaceStateField states_;
  std::array<std::vector<Vec2>, 4> grads_;
  std::array<std::vector<double>, 4> phi_;
  std::vector<double> pressure_, ratios_, volume_min_, omega_, omega_cell_;
  std::vector<double> nx_, ny_;
  std::array<std::vector<double>, 4> flux_;  // per face, already multiplied by the face length
  std::vector<double> spectral_;

  SolutionField stage_, stage2_;
  ResidualField r_stage_, r_first_;
  std::vector<double> dt_;

  double cfl_;
  int active_reductions_ = 0;
  int clean_steps_ = 0;
  SolverCounters counters_;
};

ResidualField compute_residual(const Mesh& mesh, const SolutionField& sol, const CaseConfig& cfg);
std::vector<double> local_time_step(const Mesh& mesh, const SolutionField& sol, const CaseConfig& cfg,
                                    double cfl);
void advance(const Mesh& mesh, SolutionField& sol, const CaseConfig& cfg);

/// RMS of the density residual.
double density_residual_norm(const ResidualField& r);

struct SteadyResult {
  SolutionField solution;
  ResidualHistory history;
  bool converged = false;
  SolverCounters counters;
};

/// Runs from a freestream initial state until the relative density residual drops below
/// residual_tol or max_iters iterations were taken.
SteadyResult run_steady(const Mesh& mesh, const CaseConfig& cfg);
SteadyResult run_steady(const CaseConfig& cfg);

// ---------------------------------------------------------------------------------------------
// One-dimensional shock-tube verification on a 1 x N strip of quadrilaterals.

struct ShockTube {
  Primitive1D left{1.0, 0.0, 1.0};
  Primitive1D right{0.125, 0.0, 0.1};
  double x_diaphragm = 0.5;
};

struct SodResult {
  double l1_error = 0.0;  // L1 density error against the exact solution
  int steps = 0;
  int cfl_reductions = 0;
  std::vector<double> x, rho;  // cell centres and computed densities
};

enum class TimeScheme { forward_euler, ssp_rk2 };

/// Global time step dt = cfl * dx / max(|u| + c).
SodResult sod_verification(int cells, double t_end, const FluxScheme& scheme, double cfl = 0.3,
                           TimeScheme time = TimeScheme::forward_euler, const ShockTube& tube = {},
                           const GasModel& gas = {});

}  // namespace shocklab
