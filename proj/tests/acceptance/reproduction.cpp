#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include "checks.hpp"
#include "json.hpp"
#include "shocklab/diag.hpp"
#include "shocklab/solver.hpp"

namespace shocklab::acceptance {

namespace {

struct Run {
  DiagnosticsReport report;
  bool diverged = false;
};

CaseConfig steady_case(GridKind grid, Scheme scheme, int iterations) {
  CaseConfig c;
  c.grid_kind = grid;
  c.scheme.scheme = scheme;
  c.max_iters = iterations;
  return c;
}

Run run(const std::string& label, const CaseConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const Mesh mesh = build_mesh(cfg);
  const double p_inf = freestream(cfg.mach, cfg.gas).p;
  Run r;
  try {
    const SteadyResult res = run_steady(mesh, cfg);
    r.report = make_report(mesh, res.solution, res.history, res.converged, res.counters, cfg.gas, p_inf);
  } catch (const DivergenceError& e) {
    r.diverged = true;
    r.report = make_report(mesh, e.last_valid(), e.history(), false, {}, cfg.gas, p_inf);
    r.report.diverged = true;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const DiagnosticsReport& d = r.report;
  log << "  run " << label << ": " << (r.diverged ? "diverged" : d.converged ? "converged" : "not converged")
      << ", iterations " << d.iterations << ", drop " << fmt(d.residual_drop_orders) << ", asymmetry "
      << (d.asymmetry ? fmt(*d.asymmetry) : "n/a") << ", roughness "
      << (d.shock_roughness ? fmt(*d.shock_roughness) : "n/a") << " (" << fmt(secs) << " s)" << std::endl;
  return r;
}

double asym(const Run& r, double floor) { return std::max(r.report.asymmetry.value_or(0.0), floor); }
double rough(const Run& r) { return r.report.shock_roughness.value_or(1e300); }

constexpr double kConvergedOrders = 6.0;

}  // namespace

Calibration read_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read calibration file " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  Calibration c;
  c.vanleer_asymmetry = j.at("vanleer_asymmetry").get<double>();
  c.vanleer_roughness = j.at("vanleer_roughness").get<double>();
  c.asymmetry_floor = j.at("asymmetry_floor").get<double>();
  c.steady_iterations = j.at("steady_iterations").get<int>();
  c.limiter_iterations = j.at("limiter_iterations").get<int>();
  return c;
}

void write_calibration(const Calibration& c, const std::filesystem::path& path) {
  nlohmann::json j;
  j["vanleer_asymmetry"] = c.vanleer_asymmetry;
  j["vanleer_roughness"] = c.vanleer_roughness;
  j["asymmetry_floor"] = c.asymmetry_floor;
  j["steady_iterations"] = c.steady_iterations;
  j["limiter_iterations"] = c.limiter_iterations;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write calibration file " + path.string());
  out << j.dump(2) << '\n';
}

Calibration measure_calibration(std::ostream& log) {
  Calibration c;
  const Run vl = run("van_leer grid 1", steady_case(GridKind::quad, Scheme::van_leer, c.steady_iterations), log);
  c.vanleer_asymmetry = vl.report.asymmetry.value_or(0.0);
  c.vanleer_roughness = rough(vl);
  return c;
}

Outcome carbuncle_matrix(const Calibration& cal, std::ostream& log) {
  Outcome out;
  const int n = cal.steady_iterations;
  const double floor = cal.asymmetry_floor;

  const Run vl = run("van_leer grid 1", steady_case(GridKind::quad, Scheme::van_leer, n), log);
  const Run roe = run("roe grid 1", steady_case(GridKind::quad, Scheme::roe, n), log);
  out.check(asym(roe, floor) >= 10.0 * asym(vl, floor),
            "grid 1: asymmetry roe " + fmt(asym(roe, floor)) + " >= 10 x van_leer " + fmt(asym(vl, floor)));
  out.check(!vl.diverged && vl.report.residual_drop_orders >= kConvergedOrders,
            "grid 1: van_leer residual drop " + fmt(vl.report.residual_drop_orders) + " >= 6");
  out.notes.push_back("     van_leer baseline roughness " + fmt(rough(vl)) + " (calibrated " +
                      fmt(cal.vanleer_roughness) + ")");

  const Run slau2 = run("slau grid 2", steady_case(GridKind::regular_tri, Scheme::slau, n), log);
  const Run hyb2 = run("slau_hybrid grid 2", steady_case(GridKind::regular_tri, Scheme::slau_hybrid, n), log);
  out.check(!hyb2.diverged && rough(slau2) >= 3.0 * rough(hyb2),
            "grid 2: roughness slau " + fmt(rough(slau2)) + " >= 3 x slau_hybrid " + fmt(rough(hyb2)));

  const double limit = 2.0 * cal.vanleer_roughness;
  for (Scheme s : {Scheme::slau_hybrid, Scheme::tv_hybrid}) {
    const std::string name(to_string(s));
    const Run r = run(name + " grid 3", steady_case(GridKind::irregular_tri, s, n), log);
    out.check(!r.diverged && r.report.residual_drop_orders >= kConvergedOrders,
              "grid 3: " + name + " residual drop " + fmt(r.report.residual_drop_orders) + " >= 6");
    out.check(rough(r) <= limit, "grid 3: " + name + " roughness " + fmt(rough(r)) + " <= 2 x baseline " + fmt(limit));
  }

  // Vertex-centred Roe: instability measured by the shock roughness, the one metric defined on all grids.
  std::vector<Run> vx;
  for (GridKind g : {GridKind::quad, GridKind::regular_tri, GridKind::irregular_tri}) {
    CaseConfig c = steady_case(g, Scheme::roe, n);
    c.discretization = Discretization::vertex;
    vx.push_back(run("vertex roe " + std::string(to_string(g)), c, log));
  }
  const double tri = std::max(rough(vx[1]), rough(vx[2]));
  out.check(rough(vx[0]) >= 10.0 * tri,
            "vertex roe: grid 1 roughness " + fmt(rough(vx[0])) + " >= 10 x grids 2/3 " + fmt(tri));
  out.check(asym(vx[0], floor) >= 10.0 * asym(vl, floor),
            "vertex roe: grid 1 asymmetry " + fmt(asym(vx[0], floor)) + " >= 10 x van_leer baseline");
  for (int k : {1, 2})
    out.check(!vx[k].diverged && rough(vx[k]) <= limit,
              "vertex roe: grid " + std::to_string(k + 1) + " stable, roughness " + fmt(rough(vx[k])) +
                  " <= 2 x baseline " + fmt(limit));
  return out;
}

Outcome limiter_matrix(const Calibration& cal, std::ostream& log) {
  Outcome out;
  auto limited = [&](LimiterKind kind, double k) {
    CaseConfig c = steady_case(GridKind::quad, Scheme::van_leer, cal.limiter_iterations);
    c.order = 2;
    c.limiter = {kind, k};
    c.residual_tol = 1e-4;  // only the 4-order threshold matters here
    return run(std::string(to_string(kind)) + " K=" + fmt(k), c, log);
  };
  for (LimiterKind kind : {LimiterKind::venkatakrishnan, LimiterKind::barth, LimiterKind::mlp}) {
    const Run r = limited(kind, 1.0);
    out.check(r.report.residual_drop_orders < 4.0,
              std::string(to_string(kind)) + " stalls: residual drop " + fmt(r.report.residual_drop_orders) + " < 4");
  }
  const double limit = 2.0 * std::max(cal.vanleer_asymmetry, cal.asymmetry_floor);
  for (double k : {1.0, 10.0}) {
    const Run r = limited(LimiterKind::mlp_pw, k);
    out.check(!r.diverged && r.report.residual_drop_orders >= 4.0,
              "mlp_pw K=" + fmt(k) + " residual drop " + fmt(r.report.residual_drop_orders) + " >= 4");
    out.check(asym(r, cal.asymmetry_floor) <= limit,
              "mlp_pw K=" + fmt(k) + " asymmetry " + fmt(asym(r, cal.asymmetry_floor)) + " <= 2 x baseline " + fmt(limit));
  }
  return out;
}

}  // namespace shocklab::acceptance
