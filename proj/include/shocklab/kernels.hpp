#pragma once

// Data-parallel inner loops of the solver. Each kernel has a scalar reference implementation and,
// on x86-64, an AVX2 variant picked at runtime. Both variants perform the same IEEE operations in
// the same order and therefore return identical bits.

#include <span>
#include <string_view>

namespace shocklab::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Widest instruction set supported by this CPU and build.
Isa detected_isa();
/// Instruction set currently used by the dispatching entry points. Defaults to detected_isa(),
/// or to scalar when SHOCKLAB_SIMD=scalar is set in the environment.
Isa active_isa();
/// Overrides the dispatch choice; requesting an unsupported ISA falls back to scalar.
void set_active_isa(Isa isa);

/// Face states in structure-of-arrays layout, all spans of equal length.
struct FaceStates {
  std::span<const double> rho_l, u_l, v_l, p_l;
  std::span<const double> rho_r, u_r, v_r, p_r;
  std::span<const double> nx, ny;
};

struct FaceFluxes {
  std::span<double> mass, mom_x, mom_y, energy;
};

/// Roe flux on every face. `entropy_fix` is Harten's delta as a fraction of the Roe sound speed
/// (0 disables the fix). Returns the number of faces whose Roe-averaged sound speed was not real.
int roe_flux(const FaceStates& in, double gamma, double entropy_fix, const FaceFluxes& out);
void van_leer_flux(const FaceStates& in, double gamma, const FaceFluxes& out);

/// out[i] = a_weight*a[i] + b_weight*(b[i] + dt[i]*r[i])
void rk_combine(std::span<double> out, std::span<const double> a, double a_weight,
                std::span<const double> b, double b_weight, std::span<const double> r,
                std::span<const double> dt);

/// Sum of squares, accumulated in four interleaved partial sums.
double sum_squares(std::span<const double> x);

namespace scalar {
int roe_flux(const FaceStates& in, double gamma, double entropy_fix, const FaceFluxes& out);
void van_leer_flux(const FaceStates& in, double gamma, const FaceFluxes& out);
void rk_combine(std::span<double> out, std::span<const double> a, double a_weight,
                std::span<const double> b, double b_weight, std::span<const double> r,
                std::span<const double> dt);
double sum_squares(std::span<const double> x);
}  // namespace scalar

namespace avx2 {
int roe_flux(const FaceStates& in, double gamma, double entropy_fix, const FaceFluxes& out);
void van_leer_flux(const FaceStates& in, double gamma, const FaceFluxes& out);
void rk_combine(std::span<double> out, std::span<const double> a, double a_weight,
                std::span<const double> b, double b_weight, std::span<const double> r,
                std::span<const double> dt);
double sum_squares(std::span<const double> x);
}  // namespace avx2

}  // namespace shocklab::kernels
