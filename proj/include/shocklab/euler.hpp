#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "shocklab/geometry.hpp"

namespace shocklab {

/// Calorically perfect gas. All quantities in the solver are nondimensional.
struct GasModel {
  double gamma = 1.4;
};

struct Conserved {
  double rho = 0.0;
  double mom_x = 0.0;
  double mom_y = 0.0;
  double energy = 0.0;
};

struct Primitive {
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;
};

/// Numerical or physical flux per unit face length, ordered like Conserved.
using FluxVector = std::array<double, 4>;

/// Raised when a state with non-positive density or pressure is encountered.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, std::optional<int> volume = std::nullopt)
      : std::runtime_error(what), volume_(volume) {}
  std::optional<int> volume() const { return volume_; }

 private:
  std::optional<int> volume_;
};

void validate(const GasModel& gas);

Conserved to_conserved(const Primitive& prim, const GasModel& gas,
                       std::optional<int> volume = std::nullopt);
Primitive to_primitive(const Conserved& cons, const GasModel& gas,
                       std::optional<int> volume = std::nullopt);

inline double sound_speed(const Primitive& q, const GasModel& gas) {
  return std::sqrt(gas.gamma * q.p / q.rho);
}

inline double total_enthalpy(const Primitive& q, const GasModel& gas) {
  return gas.gamma / (gas.gamma - 1.0) * q.p / q.rho + 0.5 * (q.u * q.u + q.v * q.v);
}

/// F(U)·n for the 2D Euler equations.
FluxVector physical_flux(const Primitive& prim, Vec2 normal, const GasModel& gas);

/// |u·n| + c.
double max_wave_speed(const Primitive& prim, Vec2 normal, const GasModel& gas);

/// Freestream with unit sound speed and unit pressure: rho = gamma, u = Mach.
Primitive freestream(double mach, const GasModel& gas);

}  // namespace shocklab
