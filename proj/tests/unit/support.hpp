#pragma once

#include <cmath>
#include <random>

#include "shocklab/euler.hpp"
#include "shocklab/flux.hpp"

namespace shocklab::test {

inline Primitive random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rho(0.1, 5.0), vel(-3.0, 3.0), p(0.1, 10.0);
  return {rho(rng), vel(rng), vel(rng), p(rng)};
}

inline Vec2 random_normal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  const double a = ang(rng);
  return {std::cos(a), std::sin(a)};
}

inline Vec2 rotate(Vec2 v, double a) {
  return {std::cos(a) * v.x - std::sin(a) * v.y, std::sin(a) * v.x + std::cos(a) * v.y};
}

inline Primitive rotate(const Primitive& q, double a) {
  const Vec2 u = rotate(Vec2{q.u, q.v}, a);
  return {q.rho, u.x, u.y, q.p};
}

inline FluxVector rotate(const FluxVector& f, double a) {
  const Vec2 m = rotate(Vec2{f[1], f[2]}, a);
  return {f[0], m.x, m.y, f[3]};
}

inline double rel_diff(double a, double b, double scale) { return std::abs(a - b) / std::max(1.0, scale); }

inline double flux_scale(const FluxVector& f) {
  double s = 0.0;
  for (double x : f) s = std::max(s, std::abs(x));
  return s;
}

// Two-shock/two-rarefaction pressure function of the exact Riemann problem, written out
// independently of the library solver.
inline double wave_function(double p, double rho, double pk, double gamma) {
  const double c = std::sqrt(gamma * pk / rho);
  if (p > pk) {
    const double a = 2.0 / ((gamma + 1.0) * rho);
    const double b = (gamma - 1.0) / (gamma + 1.0) * pk;
    return (p - pk) * std::sqrt(a / (p + b));
  }
  return 2.0 * c / (gamma - 1.0) * (std::pow(p / pk, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
}

struct StarByBisection {
  double p = 0.0;
  double u = 0.0;
};

inline StarByBisection star_by_bisection(const Primitive1D& l, const Primitive1D& r, double gamma) {
  auto g = [&](double p) { return wave_function(p, l.rho, l.p, gamma) + wave_function(p, r.rho, r.p, gamma) + r.u - l.u; };
  double lo = 1e-12, hi = 100.0 * std::max(l.p, r.p);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const double u = 0.5 * (l.u + r.u) + 0.5 * (wave_function(p, r.rho, r.p, gamma) - wave_function(p, l.rho, l.p, gamma));
  return {p, u};
}

}  // namespace shocklab::test
