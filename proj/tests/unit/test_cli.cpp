#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "shocklab/commands.hpp"
#include "shocklab/config.hpp"

using namespace shocklab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("shocklab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kSmallCase =
    "[case]\nmach = 8\n[grid]\nkind = quad\nn_radial = 8\nn_circumferential = 12\n"
    "[scheme]\nscheme = van_leer\norder = 1\n[run]\nmax_iters = 15\n";

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
  const auto v = parse_config_string("mach = 8\ngrid.kind = quad\nscheme = roe\norder = 1\n");
  REQUIRE(std::holds_alternative<CaseConfig>(v));
  const CaseConfig& c = std::get<CaseConfig>(v);
  CHECK(c.mach == 8.0);
  CHECK(c.gas.gamma == 1.4);
  CHECK(c.grid_kind == GridKind::quad);
  CHECK(c.scheme.scheme == Scheme::roe);
  CHECK(c.order == 1);
  CHECK(c.cfl == 0.5);
  CHECK(c.residual_tol == 1e-8);
  CHECK(c.max_iters == 50000);
  CHECK(c.limiter.k == 1.0);
  CHECK(c.discretization == Discretization::cell);
  CHECK(c.deterministic);
}

TEST_CASE("config errors name the problem") {
  CHECK_THROWS_WITH_AS(parse_config_string("mach = 8\ngrid.kind = quad\nschem = roe\n"),
                       doctest::Contains("schem"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string("grid.kind = quad\nscheme = roe\n"), doctest::Contains("mach"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string("mach = 8\nscheme = roe\n"), doctest::Contains("kind"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string("mach = 8\ngrid.kind = quad\n"), doctest::Contains("scheme"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config_string("mach = eight\ngrid.kind = quad\nscheme = roe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("mach = 8\ngrid.kind = hex\nscheme = roe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("mach = 8\ngrid.kind = quad\nscheme = roe\norder = 2\n"), ConfigError);
}

TEST_CASE("limiter parameter defaults to 1") {
  const auto v = parse_config_string("[case]\nmach=8\n[grid]\nkind=quad\n[scheme]\nscheme=van_leer\norder=2\nlimiter=mlp_pw\n");
  const CaseConfig& c = std::get<CaseConfig>(v);
  CHECK(c.limiter.kind == LimiterKind::mlp_pw);
  CHECK(c.limiter.k == 1.0);
}

TEST_CASE("every documented key round trips through the config dump") {
  CaseConfig c;
  c.mach = 6.5;
  c.gas.gamma = 1.3;
  c.grid_kind = GridKind::irregular_tri;
  c.grid = {33, 47, 0.75, 3.25, 99};
  c.discretization = Discretization::vertex;
  c.scheme = {Scheme::roe, {EntropyFix::Kind::harten, 0.15}};
  c.order = 2;
  c.limiter = {LimiterKind::venkatakrishnan, 0.3};
  c.indicator_exponent = 2.0;
  c.cfl = 0.35;
  c.max_iters = 1234;
  c.residual_tol = 3e-9;
  c.deterministic = false;
  c.threads = 3;
  c.output = {"some/dir", "pref", false};
  const auto back = parse_config_string(dump_config(c));
  REQUIRE(std::holds_alternative<CaseConfig>(back));
  CHECK(flatten(std::get<CaseConfig>(back)) == flatten(c));
}

TEST_CASE("sweeps") {
  const auto v = parse_config_string("mach = 8\ngrid.kind = quad\nscheme = roe, van_leer\n");
  REQUIRE(std::holds_alternative<SweepSpec>(v));
  const auto cases = expand(std::get<SweepSpec>(v));
  REQUIRE(cases.size() == 2);
  CHECK(cases[0].label != cases[1].label);

  const auto w = parse_config_string(
      "mach = 8\ngrid.kind = quad\nscheme = van_leer\norder = 1, 2\nlimiter = barth, mlp\nK = 1, 10\n");
  const auto grid = expand(std::get<SweepSpec>(w));
  // order 1 once; barth once (no K); mlp for each K.
  CHECK(grid.size() == 1 + 1 + 2);
  std::set<std::string> labels;
  for (const auto& c : grid) labels.insert(c.label);
  CHECK(labels.size() == grid.size());
}

TEST_CASE("matrix preset covers the reference comparisons") {
  const auto v = parse_config_string("[sweep]\npreset = matrix\n[case]\nmach = 8\n");
  const auto cases = expand(std::get<SweepSpec>(v));
  auto has = [&](GridKind g, Discretization d, Scheme s, int order, LimiterKind lim, double k) {
    for (const auto& c : cases) {
      const CaseConfig& x = c.config;
      if (x.grid_kind == g && x.discretization == d && x.scheme.scheme == s && x.order == order &&
          (order == 1 || (x.limiter.kind == lim && x.limiter.k == k)))
        return true;
    }
    return false;
  };
  using G = GridKind;
  using S = Scheme;
  using L = LimiterKind;
  const auto cell = Discretization::cell, vert = Discretization::vertex;
  CHECK(has(G::quad, cell, S::roe, 1, L::none, 1));
  CHECK(has(G::quad, cell, S::van_leer, 1, L::none, 1));
  CHECK(has(G::irregular_tri, cell, S::ausm_plus, 1, L::none, 1));
  CHECK(has(G::irregular_tri, cell, S::slau, 1, L::none, 1));
  CHECK(has(G::regular_tri, cell, S::slau, 1, L::none, 1));
  for (G g : {G::regular_tri, G::irregular_tri}) {
    CHECK(has(g, cell, S::slau_hybrid, 1, L::none, 1));
    CHECK(has(g, cell, S::tv_hybrid, 1, L::none, 1));
  }
  for (G g : {G::quad, G::regular_tri, G::irregular_tri}) CHECK(has(g, vert, S::roe, 1, L::none, 1));
  CHECK(has(G::quad, cell, S::van_leer, 2, L::venkatakrishnan, 1));
  CHECK(has(G::quad, cell, S::van_leer, 2, L::barth, 1));
  CHECK(has(G::quad, cell, S::van_leer, 2, L::mlp, 1));
  CHECK(has(G::quad, cell, S::van_leer, 2, L::mlp_pw, 1));
  CHECK(has(G::quad, cell, S::van_leer, 2, L::mlp_pw, 10));
  for (const auto& c : cases) CHECK_NOTHROW(validate(c.config));
}

TEST_CASE("run command") {
  const fs::path dir = scratch("run");
  const fs::path cfg = write_file(dir, "case.ini", kSmallCase);
  std::ostringstream log, err;
  Overrides o;
  o.out = dir / "out";
  REQUIRE(cmd_run(cfg, o, log, err) == 0);
  CHECK(fs::exists(dir / "out" / "case.vtk"));
  CHECK(fs::exists(dir / "out" / "case_history.csv"));
  CHECK(fs::exists(dir / "out" / "case_report.json"));
  const auto lines = read_lines(dir / "out" / "case_history.csv");
  CHECK(lines.size() == 16);

  std::ifstream first(dir / "out" / "case_report.json");
  const auto a = nlohmann::json::parse(first);
  CHECK(a.at("converged") == false);
  CHECK(a.at("iterations") == 15);
  REQUIRE(cmd_run(cfg, o, log, err) == 0);
  std::ifstream second(dir / "out" / "case_report.json");
  CHECK(nlohmann::json::parse(second) == a);

  const fs::path bad = write_file(dir, "bad.ini", "mach = 8\ngrid.kind = quad\nschem = roe\n");
  Overrides ob;
  ob.out = dir / "bad_out";
  CHECK(cmd_run(bad, ob, log, err) == 2);
  CHECK(!fs::exists(dir / "bad_out"));
  CHECK(err.str().find("schem") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("sweep command records one row per case") {
  const fs::path dir = scratch("sweep");
  const fs::path cfg = write_file(dir, "sweep.ini",
                                  "[case]\nmach = 8\n[grid]\nkind = quad\nn_radial = 6\nn_circumferential = 8\n"
                                  "[scheme]\nscheme = roe, van_leer\n[run]\nmax_iters = 5\n[output]\nvtk = false\n");
  std::ostringstream log, err;
  Overrides o;
  o.out = dir / "out";
  REQUIRE(cmd_sweep(cfg, o, log, err) == 0);
  const auto rows = read_lines(dir / "out" / "sweep_report.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("label,grid,discretization,scheme", 0) == 0);
  CHECK(rows[1].find(",ok,") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("a diverged case is recorded, not fatal") {
  const fs::path dir = scratch("diverge");
  // An enormous CFL number cannot be rescued by five halvings.
  const fs::path cfg = write_file(dir, "sweep.ini",
                                  "[case]\nmach = 8\n[grid]\nkind = quad\nn_radial = 6\nn_circumferential = 8\n"
                                  "[scheme]\nscheme = roe, van_leer\n[run]\nmax_iters = 50\ncfl = 500\n"
                                  "[output]\nvtk = false\n");
  std::ostringstream log, err;
  Overrides o;
  o.out = dir / "out";
  REQUIRE(cmd_sweep(cfg, o, log, err) == 0);
  const auto rows = read_lines(dir / "out" / "sweep_report.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].find(",diverged,") != std::string::npos);
  CHECK(rows[2].find(",diverged,") != std::string::npos);

  const fs::path single = write_file(dir, "case.ini",
                                     "[case]\nmach = 8\n[grid]\nkind = quad\nn_radial = 6\nn_circumferential = 8\n"
                                     "[scheme]\nscheme = roe\n[run]\nmax_iters = 50\ncfl = 500\n");
  Overrides os;
  os.out = dir / "single";
  CHECK(cmd_run(single, os, log, err) == 3);
  fs::remove_all(dir);
}

TEST_CASE("mesh command") {
  const fs::path dir = scratch("mesh");
  const fs::path cfg = write_file(dir, "m.ini",
                                  "mach = 8\nscheme = roe\n[grid]\nkind = quad\nn_radial = 4\nn_circumferential = 8\n");
  std::ostringstream log, err;
  REQUIRE(cmd_mesh(cfg, dir / "grid.mesh", log, err) == 0);
  const auto lines = read_lines(dir / "grid.mesh");
  REQUIRE(lines.size() >= 2);
  std::istringstream counts(lines[1]);
  int nn = 0;
  counts >> nn;
  CHECK(nn == 45);
  int node_lines = 0;
  for (std::size_t i = 2; i < 2 + 45 && i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    double x, y;
    std::string extra;
    node_lines += (ls >> x >> y) && !(ls >> extra);
  }
  CHECK(node_lines == 45);
  fs::remove_all(dir);
}

TEST_CASE("sod command") {
  std::ostringstream log, err;
  CHECK(cmd_sod(5, Scheme::roe, log, err) == 2);
  CHECK(err.str().find("usage") != std::string::npos);
  std::ostringstream out;
  REQUIRE(cmd_sod(50, Scheme::roe, out, err) == 0);
  CHECK(out.str().find("observed order") != std::string::npos);
}
