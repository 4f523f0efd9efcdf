#include <cstdlib>
#include <string_view>

#include "shocklab/kernels.hpp"

namespace shocklab::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
#if defined(SHOCKLAB_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

namespace {

Isa initial_isa() {
  const char* env = std::getenv("SHOCKLAB_SIMD");
  if (env && std::string_view(env) == "scalar") return Isa::scalar;
  return detected_isa();
}

Isa& current() {
  static Isa isa = initial_isa();
  return isa;
}

}  // namespace

Isa active_isa() { return current(); }

void set_active_isa(Isa isa) { current() = (isa == Isa::avx2 && detected_isa() != Isa::avx2) ? Isa::scalar : isa; }

#if defined(SHOCKLAB_HAVE_AVX2)
#define SHOCKLAB_DISPATCH(fn, ...) \
  return active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define SHOCKLAB_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

int roe_flux(const FaceStates& in, double gamma, double entropy_fix, const FaceFluxes& out) {
  SHOCKLAB_DISPATCH(roe_flux, in, gamma, entropy_fix, out);
}

void van_leer_flux(const FaceStates& in, double gamma, const FaceFluxes& out) {
  SHOCKLAB_DISPATCH(van_leer_flux, in, gamma, out);
}

void rk_combine(std::span<double> out, std::span<const double> a, double a_weight,
                std::span<const double> b, double b_weight, std::span<const double> r,
                std::span<const double> dt) {
  SHOCKLAB_DISPATCH(rk_combine, out, a, a_weight, b, b_weight, r, dt);
}

double sum_squares(std::span<const double> x) { SHOCKLAB_DISPATCH(sum_squares, x); }

#if !defined(SHOCKLAB_HAVE_AVX2)
// Non-x86 builds: the avx2 namespace forwards to the reference kernels.
namespace avx2 {
int roe_flux(const FaceStates& in, double g, double fix, const FaceFluxes& out) { return scalar::roe_flux(in, g, fix, out); }
void van_leer_flux(const FaceStates& in, double g, const FaceFluxes& out) { scalar::van_leer_flux(in, g, out); }
void rk_combine(std::span<double> out, std::span<const double> a, double wa, std::span<const double> b,
                double wb, std::span<const double> r, std::span<const double> dt) {
  scalar::rk_combine(out, a, wa, b, wb, r, dt);
}
double sum_squares(std::span<const double> x) { return scalar::sum_squares(x); }
}  // namespace avx2
#endif

}  // namespace shocklab::kernels
