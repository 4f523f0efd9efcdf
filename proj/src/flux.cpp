#include "shocklab/flux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kernels/face_flux.hpp"

namespace shocklab {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::roe: return "roe";
    case Scheme::van_leer: return "van_leer";
    case Scheme::ausm_plus: return "ausm_plus";
    case Scheme::slau: return "slau";
    case Scheme::tv: return "tv";
    case Scheme::slau_hybrid: return "slau_hybrid";
    case Scheme::tv_hybrid: return "tv_hybrid";
    case Scheme::exact_godunov: return "exact_godunov";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view s) {
  for (Scheme k : {Scheme::roe, Scheme::van_leer, Scheme::ausm_plus, Scheme::slau, Scheme::tv,
                   Scheme::slau_hybrid, Scheme::tv_hybrid, Scheme::exact_godunov})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown flux scheme '" + std::string(s) + "'");
}

bool is_hybrid(Scheme s) { return s == Scheme::slau_hybrid || s == Scheme::tv_hybrid; }

Scheme hybrid_base(Scheme s) {
  if (s == Scheme::slau_hybrid) return Scheme::slau;
  if (s == Scheme::tv_hybrid) return Scheme::tv;
  return s;
}

void validate(const FluxScheme& s) {
  if (s.entropy_fix.kind == EntropyFix::Kind::harten && !(s.entropy_fix.delta >= 0.0))
    throw std::invalid_argument("Harten entropy-fix delta must be non-negative");
}

namespace {

// State seen from a face: normal and tangential velocity, enthalpy and sound speed.
struct FaceState {
  double rho, un, ut, p, h, c;
};

FaceState to_face(const Primitive& q, Vec2 n, const GasModel& gas) {
  if (!(q.rho > 0.0) || !(q.p > 0.0)) {
    std::ostringstream os;
    os << "flux evaluated on non-positive state rho=" << q.rho << " p=" << q.p;
    throw PositivityError(os.str());
  }
  const double un = q.u * n.x + q.v * n.y;
  const double ut = q.v * n.x - q.u * n.y;
  return {q.rho, un, ut, q.p, total_enthalpy(q, gas), sound_speed(q, gas)};
}

// Face-frame flux (mass, normal momentum, tangential momentum, energy) back to x/y.
FluxVector from_face(double f0, double fn, double ft, double fe, Vec2 n) {
  return {f0, fn * n.x - ft * n.y, fn * n.y + ft * n.x, fe};
}

FluxVector face_physical(const FaceState& s, Vec2 n) {
  const double m = s.rho * s.un;
  return from_face(m, m * s.un + s.p, m * s.ut, m * s.h, n);
}

kernels::detail::FaceInput face_input(const Primitive& l, const Primitive& r, Vec2 n) {
  return {l.rho, l.u, l.v, l.p, r.rho, r.u, r.v, r.p, n.x, n.y};
}

FluxVector roe(const Primitive& l, const Primitive& r, Vec2 n, const GasModel& gas, const EntropyFix& fix) {
  to_face(l, n, gas);
  to_face(r, n, gas);
  FluxVector f;
  const double delta = fix.kind == EntropyFix::Kind::harten ? fix.delta : 0.0;
  if (!kernels::detail::roe_face(face_input(l, r, n), gas.gamma, delta, f.data()))
    throw PositivityError("Roe average has non-positive sound speed");
  return f;
}

FluxVector van_leer(const Primitive& l, const Primitive& r, Vec2 n, const GasModel& gas) {
  to_face(l, n, gas);
  to_face(r, n, gas);
  FluxVector f;
  kernels::detail::van_leer_face(face_input(l, r, n), gas.gamma, f.data());
  return f;
}

// Liou's AUSM+ with beta = 1/8, alpha = 3/16.
FluxVector ausm_plus(const Primitive& lq, const Primitive& rq, Vec2 n, const GasModel& gas) {
  const FaceState l = to_face(lq, n, gas);
  const FaceState r = to_face(rq, n, gas);
  constexpr double beta = 1.0 / 8.0;
  constexpr double alpha = 3.0 / 16.0;
  const double g = gas.gamma;

  const double cs2_l = 2.0 * (g - 1.0) / (g + 1.0) * l.h;
  const double cs2_r = 2.0 * (g - 1.0) / (g + 1.0) * r.h;
  const double ch_l = cs2_l / std::max(std::sqrt(cs2_l), std::abs(l.un));
  const double ch_r = cs2_r / std::max(std::sqrt(cs2_r), std::abs(r.un));
  const double c_half = std::min(ch_l, ch_r);
  const double ml = l.un / c_half;
  const double mr = r.un / c_half;

  auto m4_plus = [](double m) {
    if (std::abs(m) >= 1.0) return 0.5 * (m + std::abs(m));
    const double t = m * m - 1.0;
    return 0.25 * (m + 1.0) * (m + 1.0) + beta * t * t;
  };
  auto m4_minus = [](double m) {
    if (std::abs(m) >= 1.0) return 0.5 * (m - std::abs(m));
    const double t = m * m - 1.0;
    return -0.25 * (m - 1.0) * (m - 1.0) - beta * t * t;
  };
  auto p5_plus = [](double m) {
    if (std::abs(m) >= 1.0) return m > 0.0 ? 1.0 : 0.0;
    const double t = m * m - 1.0;
    return 0.25 * (m + 1.0) * (m + 1.0) * (2.0 - m) + alpha * m * t * t;
  };
  auto p5_minus = [](double m) {
    if (std::abs(m) >= 1.0) return m < 0.0 ? 1.0 : 0.0;
    const double t = m * m - 1.0;
    return 0.25 * (m - 1.0) * (m - 1.0) * (2.0 + m) - alpha * m * t * t;
  };

  const double m_half = m4_plus(ml) + m4_minus(mr);
  const double p_half = p5_plus(ml) * l.p + p5_minus(mr) * r.p;
  const double mdot_l = c_half * 0.5 * (m_half + std::abs(m_half)) * l.rho;
  const double mdot_r = c_half * 0.5 * (m_half - std::abs(m_half)) * r.rho;
  return from_face(mdot_l + mdot_r, mdot_l * l.un + mdot_r * r.un + p_half,
                   mdot_l * l.ut + mdot_r * r.ut, mdot_l * l.h + mdot_r * r.h, n);
}

// Both states supersonic in the same direction: full upwinding.
const FaceState* supersonic_upwind(const FaceState& l, const FaceState& r) {
  if (l.un >= l.c && r.un >= r.c) return &l;
  if (l.un <= -l.c && r.un <= -r.c) return &r;
  return nullptr;
}

// Shima & Kitamura's SLAU.
FluxVector slau(const Primitive& lq, const Primitive& rq, Vec2 n, const GasModel& gas) {
  const FaceState l = to_face(lq, n, gas);
  const FaceState r = to_face(rq, n, gas);
  if (const FaceState* up = supersonic_upwind(l, r)) return face_physical(*up, n);

  const double c_bar = 0.5 * (l.c + r.c);
  const double ml = l.un / c_bar;
  const double mr = r.un / c_bar;

  const double vn_bar = (l.rho * std::abs(l.un) + r.rho * std::abs(r.un)) / (l.rho + r.rho);
  const double g = -std::max(std::min(ml, 0.0), -1.0) * std::min(std::max(mr, 0.0), 1.0);
  const double vn_plus = (1.0 - g) * vn_bar + g * std::abs(l.un);
  const double vn_minus = (1.0 - g) * vn_bar + g * std::abs(r.un);

  const double q2 = 0.5 * (l.un * l.un + l.ut * l.ut + r.un * r.un + r.ut * r.ut);
  const double m_hat = std::min(1.0, std::sqrt(q2) / c_bar);
  const double chi = (1.0 - m_hat) * (1.0 - m_hat);

  const double dp = r.p - l.p;
  const double mdot = 0.5 * (l.rho * (l.un + vn_plus) + r.rho * (r.un - vn_minus) - chi / c_bar * dp);

  auto beta_plus = [](double m) {
    if (std::abs(m) >= 1.0) return m > 0.0 ? 1.0 : 0.0;
    return 0.25 * (2.0 - m) * (m + 1.0) * (m + 1.0);
  };
  auto beta_minus = [](double m) {
    if (std::abs(m) >= 1.0) return m < 0.0 ? 1.0 : 0.0;
    return 0.25 * (2.0 + m) * (m - 1.0) * (m - 1.0);
  };
  const double bp = beta_plus(ml);
  const double bm = beta_minus(mr);
  const double p_avg = 0.5 * (l.p + r.p);
  const double p_tilde = p_avg + 0.5 * (bp - bm) * (l.p - r.p) +
                         (1.0 - chi) * (bp + bm - 1.0) * p_avg;

  const double mdot_l = 0.5 * (mdot + std::abs(mdot));
  const double mdot_r = 0.5 * (mdot - std::abs(mdot));
  return from_face(mdot_l + mdot_r, mdot_l * l.un + mdot_r * r.un + p_tilde,
                   mdot_l * l.ut + mdot_r * r.ut, mdot_l * l.h + mdot_r * r.h, n);
}

// Toro & Vazquez-Cendon splitting: upwinded advection system plus the linearised solution of the
// pressure system.
FluxVector toro_vazquez(const Primitive& lq, const Primitive& rq, Vec2 n, const GasModel& gas) {
  const FaceState l = to_face(lq, n, gas);
  const FaceState r = to_face(rq, n, gas);
  if (const FaceState* up = supersonic_upwind(l, r)) return face_physical(*up, n);

  const double lam_l = 0.5 * (l.un - std::sqrt(l.un * l.un + 4.0 * l.c * l.c));
  const double lam_r = 0.5 * (r.un + std::sqrt(r.un * r.un + 4.0 * r.c * r.c));
  const double cl = l.rho * lam_l;
  const double cr = r.rho * lam_r;
  const double inv = 1.0 / (cr - cl);
  const double p_star = (cr * l.p - cl * r.p + cl * cr * (r.un - l.un)) * inv;
  const double u_star = (cr * r.un - cl * l.un - (r.p - l.p)) * inv;

  const FaceState& up = u_star > 0.0 ? l : r;
  const double mass = u_star * up.rho;
  const double ke = 0.5 * up.rho * (up.un * up.un + up.ut * up.ut);
  const double g = gas.gamma;
  return from_face(mass, mass * up.un + p_star, mass * up.ut,
                   u_star * ke + g / (g - 1.0) * p_star * u_star, n);
}

FluxVector exact_godunov(const Primitive& lq, const Primitive& rq, Vec2 n, const GasModel& gas) {
  const FaceState l = to_face(lq, n, gas);
  const FaceState r = to_face(rq, n, gas);
  const Primitive1D l1{l.rho, l.un, l.p};
  const Primitive1D r1{r.rho, r.un, r.p};
  const RiemannStar star = exact_riemann_star(l1, r1, gas);
  const Primitive1D s = sample_riemann(l1, r1, star, 0.0, gas);
  const double ut = star.u_star >= 0.0 ? l.ut : r.ut;
  const double m = s.rho * s.u;
  const double h = gas.gamma / (gas.gamma - 1.0) * s.p / s.rho + 0.5 * (s.u * s.u + ut * ut);
  return from_face(m, m * s.u + s.p, m * ut, m * h, n);
}

}  // namespace

FluxVector base_flux(const FluxScheme& scheme, const Primitive& left, const Primitive& right, Vec2 n,
                     const GasModel& gas) {
  switch (hybrid_base(scheme.scheme)) {
    case Scheme::roe: return roe(left, right, n, gas, scheme.entropy_fix);
    case Scheme::van_leer: return van_leer(left, right, n, gas);
    case Scheme::ausm_plus: return ausm_plus(left, right, n, gas);
    case Scheme::slau: return slau(left, right, n, gas);
    case Scheme::tv: return toro_vazquez(left, right, n, gas);
    case Scheme::exact_godunov: return exact_godunov(left, right, n, gas);
    default: break;
  }
  throw std::logic_error("unhandled flux scheme");
}

FluxVector hybrid_flux(Scheme base, double omega, const Primitive& left, const Primitive& right,
                       Vec2 n, const GasModel& gas) {
  if (base != Scheme::slau && base != Scheme::tv)
    throw std::invalid_argument("hybrid flux base must be slau or tv");
  if (!(omega > 0.0 && omega <= 1.0))
    throw std::invalid_argument("hybrid weight omega must lie in (0, 1]");
  FluxVector f = base_flux({base, {}}, left, right, n, gas);
  if (omega == 1.0) return f;
  const FluxVector d = van_leer(left, right, n, gas);
  const double fn = omega * (f[1] * n.x + f[2] * n.y) + (1.0 - omega) * (d[1] * n.x + d[2] * n.y);
  const double ft = f[2] * n.x - f[1] * n.y;
  f[1] = fn * n.x - ft * n.y;
  f[2] = fn * n.y + ft * n.x;
  return f;
}

FluxVector numerical_flux(const FluxScheme& scheme, double omega, const Primitive& left,
                          const Primitive& right, Vec2 n, const GasModel& gas) {
  if (is_hybrid(scheme.scheme)) return hybrid_flux(hybrid_base(scheme.scheme), omega, left, right, n, gas);
  return base_flux(scheme, left, right, n, gas);
}

}  // namespace shocklab
