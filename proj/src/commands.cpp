#include "shocklab/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "shocklab/diag.hpp"

namespace shocklab {

void apply_overrides(CaseConfig& cfg, const Overrides& o) {
  if (o.out) cfg.output.dir = *o.out;
  if (o.deterministic) cfg.deterministic = *o.deterministic;
  if (o.threads) cfg.threads = *o.threads;
}

RunOutputs output_paths(const CaseConfig& cfg) {
  const auto& d = cfg.output.dir;
  const std::string& p = cfg.output.prefix;
  return {d / (p + ".vtk"), d / (p + "_history.csv"), d / (p + "_report.json")};
}

namespace {

struct CaseOutcome {
  DiagnosticsReport report;
  std::string status = "ok";
  std::string message;
};

std::vector<ScalarField> output_fields(const Mesh& mesh, const SolutionField& sol, const CaseConfig& cfg) {
  std::vector<ScalarField> fields;
  std::vector<double> p(sol.size());
  for (int i = 0; i < sol.size(); ++i) p[i] = to_primitive(sol.at(i), cfg.gas, i).p;
  IndicatorOptions opts;
  opts.freestream_pressure = freestream(cfg.mach, cfg.gas).p;
  opts.exponent = cfg.indicator_exponent;
  fields.push_back({"omega", volume_indicator(mesh, p, opts)});
  if (cfg.order == 2) {
    Solver solver(mesh, cfg);
    ResidualField r;
    solver.compute_residual(sol, r);
    const char* names[4] = {"limiter_rho", "limiter_u", "limiter_v", "limiter_p"};
    for (int k = 0; k < 4; ++k) fields.push_back({names[k], solver.limiter_phi()[k]});
  }
  return fields;
}

// Runs one validated case and writes its outputs; never throws for solver failures.
CaseOutcome run_case(const CaseConfig& cfg, std::ostream& log) {
  CaseOutcome out;
  const Mesh mesh = build_mesh(cfg);
  const double p_inf = freestream(cfg.mach, cfg.gas).p;
  SolutionField sol;
  ResidualHistory history;
  SolverCounters counters;
  bool converged = false;
  try {
    SteadyResult res = run_steady(mesh, cfg);
    sol = std::move(res.solution);
    history = std::move(res.history);
    counters = res.counters;
    converged = res.converged;
  } catch (const DivergenceError& e) {
    out.status = "diverged";
    out.message = e.what();
    sol = e.last_valid();
    history = e.history();
  }

  out.report = make_report(mesh, sol, history, converged, counters, cfg.gas, p_inf);
  out.report.diverged = out.status == "diverged";

  std::filesystem::create_directories(cfg.output.dir);
  const RunOutputs paths = output_paths(cfg);
  if (cfg.output.vtk) export_vtk(mesh, sol, cfg.gas, output_fields(mesh, sol, cfg), paths.vtk);
  export_history(history, paths.history);
  write_run_report(out.report, flatten(cfg), paths.report);

  log << cfg.output.prefix << ": " << out.status << ", " << out.report.iterations << " iterations, residual drop "
      << std::setprecision(4) << out.report.residual_drop_orders << " orders"
      << (out.report.converged ? " (converged)" : "") << '\n';
  return out;
}

std::string optional_text(const std::optional<double>& x) {
  if (!x) return "";
  std::ostringstream os;
  os << std::setprecision(9) << *x;
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

int cmd_run(const std::filesystem::path& config, const Overrides& o, std::ostream& log, std::ostream& err) {
  CaseConfig cfg;
  try {
    cfg = parse_case(config);
    apply_overrides(cfg, o);
    validate(cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    const CaseOutcome res = run_case(cfg, log);
    if (res.status == "diverged") {
      err << "error: " << res.message << '\n';
      return 3;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int cmd_sweep(const std::filesystem::path& config, const Overrides& o, std::ostream& log, std::ostream& err) {
  SweepSpec sweep;
  std::vector<LabeledCase> cases;
  try {
    sweep = parse_sweep(config);
    apply_overrides(sweep.base, o);
    cases = expand(sweep);
    for (const auto& c : cases) validate(c.config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (cases.size() > 200) err << "warning: sweep has " << cases.size() << " cases\n";

  const std::filesystem::path root = sweep.base.output.dir;
  std::filesystem::create_directories(root);
  std::ofstream csv(root / "sweep_report.csv");
  if (!csv) {
    err << "error: cannot write " << (root / "sweep_report.csv").string() << '\n';
    return 2;
  }
  csv << "label,grid,discretization,scheme,order,limiter,K,status,converged,iterations,residual_drop_orders,"
         "asymmetry,shock_roughness,limiter_fallbacks,cfl_reductions,message\n";
  for (const LabeledCase& lc : cases) {
    CaseConfig cfg = lc.config;
    cfg.output.dir = root / lc.label;
    cfg.output.prefix = lc.label;
    CaseOutcome res;
    try {
      res = run_case(cfg, log);
    } catch (const std::exception& e) {
      res.status = "error";
      res.message = e.what();
      log << lc.label << ": error: " << e.what() << '\n';
    }
    const DiagnosticsReport& r = res.report;
    csv << csv_escape(lc.label) << ',' << to_string(cfg.grid_kind) << ',' << to_string(cfg.discretization) << ','
        << to_string(cfg.scheme.scheme) << ',' << cfg.order << ',' << to_string(cfg.limiter.kind) << ','
        << format_double(cfg.limiter.k) << ',' << res.status << ',' << (r.converged ? "true" : "false") << ','
        << r.iterations << ',' << std::setprecision(9) << r.residual_drop_orders << ','
        << optional_text(r.asymmetry) << ',' << optional_text(r.shock_roughness) << ',' << r.limiter_fallbacks
        << ',' << r.cfl_reductions << ',' << csv_escape(res.message) << '\n';
    csv.flush();
  }
  return 0;
}

int cmd_sod(int cells, Scheme scheme, std::ostream& log, std::ostream& err) {
  if (cells < 10) {
    err << "usage error: the shock tube needs at least 10 cells\n";
    return 2;
  }
  try {
    const FluxScheme fs{scheme, {}};
    const SodResult coarse = sod_verification(cells, 0.2, fs);
    const SodResult fine = sod_verification(2 * cells, 0.2, fs);
    const double order = std::log2(coarse.l1_error / fine.l1_error);
    log << std::setprecision(6) << "scheme " << to_string(scheme) << '\n'
        << "cells " << cells << " L1 " << coarse.l1_error << '\n'
        << "cells " << 2 * cells << " L1 " << fine.l1_error << '\n'
        << "ratio " << coarse.l1_error / fine.l1_error << " observed order " << order << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

int cmd_mesh(const std::filesystem::path& config, const std::filesystem::path& out, std::ostream& log,
             std::ostream& err) {
  try {
    const CaseConfig cfg = parse_case(config);
    const Mesh mesh = cfg.mesh_file.empty() ? generate_grid(cfg.grid_kind, cfg.grid) : read_mesh(cfg.mesh_file);
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    write_mesh(mesh, out);
    log << "wrote " << out.string() << ": " << mesh.num_nodes() << " nodes, " << mesh.num_volumes() << " cells, "
        << mesh.num_faces() << " faces\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace shocklab
