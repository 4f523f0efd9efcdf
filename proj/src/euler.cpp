#include "shocklab/euler.hpp"

#include <sstream>

namespace shocklab {

namespace {

[[noreturn]] void positivity_failure(const char* what, double rho, double p,
                                     std::optional<int> volume) {
  std::ostringstream os;
  os << what << ": rho=" << rho << " p=" << p;
  if (volume) os << " (volume " << *volume << ")";
  throw PositivityError(os.str(), volume);
}

}  // namespace

void validate(const GasModel& gas) {
  if (!(gas.gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
}

Conserved to_conserved(const Primitive& q, const GasModel& gas, std::optional<int> volume) {
  if (!(q.rho > 0.0) || !(q.p > 0.0)) positivity_failure("non-positive primitive state", q.rho, q.p, volume);
  const double ke = 0.5 * q.rho * (q.u * q.u + q.v * q.v);
  return {q.rho, q.rho * q.u, q.rho * q.v, q.p / (gas.gamma - 1.0) + ke};
}

Primitive to_primitive(const Conserved& c, const GasModel& gas, std::optional<int> volume) {
  if (!(c.rho > 0.0)) positivity_failure("non-positive density", c.rho, 0.0, volume);
  const double u = c.mom_x / c.rho;
  const double v = c.mom_y / c.rho;
  const double p = (gas.gamma - 1.0) * (c.energy - 0.5 * (c.mom_x * u + c.mom_y * v));
  if (!(p > 0.0)) positivity_failure("non-positive pressure", c.rho, p, volume);
  return {c.rho, u, v, p};
}

FluxVector physical_flux(const Primitive& q, Vec2 n, const GasModel& gas) {
  const double un = q.u * n.x + q.v * n.y;
  const double energy = q.p / (gas.gamma - 1.0) + 0.5 * q.rho * (q.u * q.u + q.v * q.v);
  const double mass = q.rho * un;
  return {mass, mass * q.u + q.p * n.x, mass * q.v + q.p * n.y, (energy + q.p) * un};
}

double max_wave_speed(const Primitive& q, Vec2 n, const GasModel& gas) {
  return std::abs(q.u * n.x + q.v * n.y) + sound_speed(q, gas);
}

Primitive freestream(double mach, const GasModel& gas) {
  return {gas.gamma, mach, 0.0, 1.0};
}

}  // namespace shocklab
