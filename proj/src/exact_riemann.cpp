#include <cmath>
#include <sstream>

#include "shocklab/flux.hpp"

namespace shocklab {

namespace {

struct Side {
  double rho, u, p, c, a, b;  // a, b: shock-branch constants
};

Side make_side(const Primitive1D& s, const GasModel& gas) {
  if (!(s.rho > 0.0) || !(s.p > 0.0)) throw PositivityError("Riemann data must have positive rho and p");
  const double g = gas.gamma;
  return {s.rho, s.u, s.p, std::sqrt(g * s.p / s.rho), 2.0 / ((g + 1.0) * s.rho), (g - 1.0) / (g + 1.0) * s.p};
}

// Velocity jump across one nonlinear wave connecting state k to pressure p, and its derivative.
void wave_function(double p, const Side& k, const GasModel& gas, double& f, double& df) {
  const double g = gas.gamma;
  if (p > k.p) {
    const double q = std::sqrt(k.a / (p + k.b));
    f = (p - k.p) * q;
    df = q * (1.0 - 0.5 * (p - k.p) / (k.b + p));
  } else {
    const double r = p / k.p;
    f = 2.0 * k.c / (g - 1.0) * (std::pow(r, (g - 1.0) / (2.0 * g)) - 1.0);
    df = 1.0 / (k.rho * k.c) * std::pow(r, -(g + 1.0) / (2.0 * g));
  }
}

double pressure_function(double p, const Side& l, const Side& r, const GasModel& gas, double* deriv) {
  double fl, dfl, fr, dfr;
  wave_function(p, l, gas, fl, dfl);
  wave_function(p, r, gas, fr, dfr);
  if (deriv) *deriv = dfl + dfr;
  return fl + fr + (r.u - l.u);
}

}  // namespace

RiemannStar exact_riemann_star(const Primitive1D& left, const Primitive1D& right, const GasModel& gas) {
  validate(gas);
  const Side l = make_side(left, gas);
  const Side r = make_side(right, gas);
  const double g = gas.gamma;

  if (2.0 * (l.c + r.c) / (g - 1.0) <= r.u - l.u) {
    std::ostringstream os;
    os << "Riemann data generate vacuum (du = " << r.u - l.u << ")";
    throw VacuumError(os.str());
  }

  RiemannStar star;
  // Two-rarefaction initial guess (exact when both waves are rarefactions).
  const double z = (g - 1.0) / (2.0 * g);
  const double guess = std::pow((l.c + r.c - 0.5 * (g - 1.0) * (r.u - l.u)) /
                                    (l.c / std::pow(l.p, z) + r.c / std::pow(r.p, z)), 1.0 / z);
  double p = std::max(guess, 1e-14 * std::min(l.p, r.p));

  bool converged = false;
  for (int it = 1; it <= 50; ++it) {
    double df = 0.0;
    const double f = pressure_function(p, l, r, gas, &df);
    const double next = p - f / df;
    star.newton_iterations = it;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < 1e-12) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    // Bounded bisection: the pressure function is monotone increasing in p.
    star.used_bisection = true;
    double lo = 0.0;
    double hi = std::max(l.p, r.p);
    while (pressure_function(hi, l, r, gas, nullptr) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pressure_function(mid, l, r, gas, nullptr) < 0.0 ? lo : hi) = mid;
    }
    p = 0.5 * (lo + hi);
  }

  double fl, fr, d;
  wave_function(p, l, gas, fl, d);
  wave_function(p, r, gas, fr, d);
  star.p_star = p;
  star.u_star = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);
  star.left_wave = p > l.p ? WaveType::shock : WaveType::rarefaction;
  star.right_wave = p > r.p ? WaveType::shock : WaveType::rarefaction;
  return star;
}

Primitive1D sample_riemann(const Primitive1D& left, const Primitive1D& right, const RiemannStar& star,
                           double xi, const GasModel& gas) {
  const double g = gas.gamma;
  const double gm = (g - 1.0) / (g + 1.0);
  const double ps = star.p_star;
  const double us = star.u_star;

  if (xi <= us) {
    const double c = std::sqrt(g * left.p / left.rho);
    const double pr = ps / left.p;
    if (ps > left.p) {
      const double speed = left.u - c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
      if (xi <= speed) return left;
      return {left.rho * (pr + gm) / (gm * pr + 1.0), us, ps};
    }
    const double head = left.u - c;
    if (xi <= head) return left;
    const double c_star = c * std::pow(pr, (g - 1.0) / (2.0 * g));
    const double tail = us - c_star;
    if (xi >= tail) return {left.rho * std::pow(pr, 1.0 / g), us, ps};
    const double fan = 2.0 / (g + 1.0) + gm / c * (left.u - xi);
    return {left.rho * std::pow(fan, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * left.u + xi),
            left.p * std::pow(fan, 2.0 * g / (g - 1.0))};
  }

  const double c = std::sqrt(g * right.p / right.rho);
  const double pr = ps / right.p;
  if (ps > right.p) {
    const double speed = right.u + c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
    if (xi >= speed) return right;
    return {right.rho * (pr + gm) / (gm * pr + 1.0), us, ps};
  }
  const double head = right.u + c;
  if (xi >= head) return right;
  const double c_star = c * std::pow(pr, (g - 1.0) / (2.0 * g));
  const double tail = us + c_star;
  if (xi <= tail) return {right.rho * std::pow(pr, 1.0 / g), us, ps};
  const double fan = 2.0 / (g + 1.0) - gm / c * (right.u - xi);
  return {right.rho * std::pow(fan, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * right.u + xi),
          right.p * std::pow(fan, 2.0 * g / (g - 1.0))};
}

std::array<double, 3> godunov_flux(const Primitive1D& left, const Primitive1D& right, const GasModel& gas) {
  const RiemannStar star = exact_riemann_star(left, right, gas);
  const Primitive1D s = sample_riemann(left, right, star, 0.0, gas);
  const double m = s.rho * s.u;
  const double energy = s.p / (gas.gamma - 1.0) + 0.5 * s.rho * s.u * s.u;
  return {m, m * s.u + s.p, (energy + s.p) * s.u};
}

}  // namespace shocklab
