#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace shocklab::acceptance {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;  // one line per sub-check

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

/// Baselines measured by a calibration run and stored next to the acceptance sources.
struct Calibration {
  double vanleer_asymmetry = 0.0;  // grid 1, order 1, cell-centred
  double vanleer_roughness = 0.0;
  double asymmetry_floor = 1e-12;  // asymmetry values below this are round-off
  int steady_iterations = 20000;
  int limiter_iterations = 50000;
};

Calibration read_calibration(const std::filesystem::path& path);
void write_calibration(const Calibration& c, const std::filesystem::path& path);
Calibration measure_calibration(std::ostream& log);

Outcome flux_properties();
Outcome riemann_oracle();
Outcome shock_tube();
Outcome carbuncle_matrix(const Calibration& cal, std::ostream& log);
Outcome limiter_matrix(const Calibration& cal, std::ostream& log);
Outcome indicator_properties();
Outcome solver_invariants();
Outcome reconstruction();

std::string fmt(double x);

}  // namespace shocklab::acceptance
