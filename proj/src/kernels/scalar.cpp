#include "face_flux.hpp"
#include "shocklab/kernels.hpp"

namespace shocklab::kernels::scalar {

namespace {

detail::FaceInput load(const FaceStates& in, std::size_t i) {
  return {in.rho_l[i], in.u_l[i], in.v_l[i], in.p_l[i], in.rho_r[i], in.u_r[i],
          in.v_r[i],   in.p_r[i], in.nx[i],  in.ny[i]};
}

void store(const FaceFluxes& out, std::size_t i, const double* f) {
  out.mass[i] = f[0];
  out.mom_x[i] = f[1];
  out.mom_y[i] = f[2];
  out.energy[i] = f[3];
}

}  // namespace

int roe_flux(const FaceStates& in, double gamma, double entropy_fix, const FaceFluxes& out) {
  int bad = 0;
  double f[4];
  for (std::size_t i = 0; i < in.nx.size(); ++i) {
    if (!detail::roe_face(load(in, i), gamma, entropy_fix, f)) ++bad;
    store(out, i, f);
  }
  return bad;
}

void van_leer_flux(const FaceStates& in, double gamma, const FaceFluxes& out) {
  double f[4];
  for (std::size_t i = 0; i < in.nx.size(); ++i) {
    detail::van_leer_face(load(in, i), gamma, f);
    store(out, i, f);
  }
}

void rk_combine(std::span<double> out, std::span<const double> a, double a_weight,
                std::span<const double> b, double b_weight, std::span<const double> r,
                std::span<const double> dt) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = a_weight * a[i] + b_weight * (b[i] + dt[i] * r[i]);
}

double sum_squares(std::span<const double> x) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4)
    for (int k = 0; k < 4; ++k) s[k] += x[i + k] * x[i + k];
  for (int k = 0; i < x.size(); ++i, ++k) s[k] += x[i] * x[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace shocklab::kernels::scalar
