#pragma once

#include <string_view>

#include "shocklab/euler.hpp"

namespace shocklab {

/// Interface flux functions. `exact_godunov` samples the exact Riemann solution and exists for
/// verification runs only.
enum class Scheme { roe, van_leer, ausm_plus, slau, tv, slau_hybrid, tv_hybrid, exact_godunov };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

bool is_hybrid(Scheme s);
/// SLAU for slau_hybrid, TV for tv_hybrid, identity otherwise.
Scheme hybrid_base(Scheme s);

/// Harten's entropy fix on the acoustic waves of the Roe solver; `delta` is a fraction of the
/// Roe-averaged sound speed.
struct EntropyFix {
  enum class Kind { none, harten };
  Kind kind = Kind::none;
  double delta = 0.1;
};

struct FluxScheme {
  Scheme scheme = Scheme::roe;
  EntropyFix entropy_fix;
};

void validate(const FluxScheme& s);

/// Numerical flux through a face with unit normal `n` (pointing from left to right).
/// Hybrid schemes evaluate their base scheme here.
FluxVector base_flux(const FluxScheme& scheme, const Primitive& left, const Primitive& right, Vec2 n,
                     const GasModel& gas);

/// Momentum-only blend of a SLAU or TV flux with the van Leer flux: mass, energy and the
/// tangential momentum come from `base`, the face-normal momentum is omega*base + (1-omega)*van_leer.
FluxVector hybrid_flux(Scheme base, double omega, const Primitive& left, const Primitive& right,
                       Vec2 n, const GasModel& gas);

/// Dispatches to hybrid_flux for hybrid schemes (with the given weight) and base_flux otherwise.
FluxVector numerical_flux(const FluxScheme& scheme, double omega, const Primitive& left,
                          const Primitive& right, Vec2 n, const GasModel& gas);

// ---------------------------------------------------------------------------------------------
// Exact Riemann solver (1D), used as a verification oracle.

struct Primitive1D {
  double rho = 0.0;
  double u = 0.0;
  double p = 0.0;
};

enum class WaveType { shock, rarefaction };

struct RiemannStar {
  double p_star = 0.0;
  double u_star = 0.0;
  WaveType left_wave = WaveType::rarefaction;
  WaveType right_wave = WaveType::rarefaction;
  int newton_iterations = 0;
  bool used_bisection = false;
};

class VacuumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RiemannStar exact_riemann_star(const Primitive1D& left, const Primitive1D& right, const GasModel& gas);

/// Solution of the Riemann problem at similarity coordinate xi = x/t.
Primitive1D sample_riemann(const Primitive1D& left, const Primitive1D& right, const RiemannStar& star,
                           double xi, const GasModel& gas);

/// 1D flux (mass, momentum, energy) of the exact solution at x/t = 0.
std::array<double, 3> godunov_flux(const Primitive1D& left, const Primitive1D& right, const GasModel& gas);

}  // namespace shocklab
