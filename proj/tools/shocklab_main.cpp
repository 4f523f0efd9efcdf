#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "shocklab/commands.hpp"

int main(int argc, char** argv) {
  using namespace shocklab;
  CLI::App app{"Finite-volume Euler solver for shock-instability experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  bool deterministic = true;
  int threads = 0;
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (overrides [output] dir)");
    sub->add_flag("--deterministic,!--no-deterministic", deterministic,
                  "Fixed-order residual accumulation (default on)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App* run = app.add_subcommand("run", "Run one steady case");
  add_run_flags(run);
  CLI::App* sweep = app.add_subcommand("sweep", "Run a scheme/grid/limiter sweep");
  add_run_flags(sweep);

  CLI::App* mesh = app.add_subcommand("mesh", "Write the grid described by a config");
  std::string mesh_out = "mesh.txt";
  mesh->add_option("--config", config, "INI configuration file")->required()->check(CLI::ExistingFile);
  mesh->add_option("--out", mesh_out, "Mesh file to write");

  CLI::App* sod = app.add_subcommand("sod", "Shock-tube verification at N and 2N cells");
  int cells = 100;
  std::string scheme = "roe";
  sod->add_option("--cells", cells, "Coarse cell count (at least 10)");
  sod->add_option("--scheme", scheme, "Flux scheme");

  CLI11_PARSE(app, argc, argv);

  Overrides o;
  if (!out.empty()) o.out = out;
  o.deterministic = deterministic;
  if (threads > 0) o.threads = threads;

  if (*run) return cmd_run(config, o, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(config, o, std::cout, std::cerr);
  if (*mesh) return cmd_mesh(config, mesh_out, std::cout, std::cerr);
  Scheme s;
  try {
    s = scheme_from_string(scheme);
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  return cmd_sod(cells, s, std::cout, std::cerr);
}
