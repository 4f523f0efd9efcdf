#pragma once

// Scalar reference formulas for the Roe and van Leer face fluxes. The AVX2 kernels repeat these
// operations in the same order, so both paths round identically.

#include <cmath>

namespace shocklab::kernels::detail {

struct FaceInput {
  double rl, ul, vl, pl;
  double rr, ur, vr, pr;
  double nx, ny;
};

/// Returns false when the Roe-averaged sound speed is not real.
inline bool roe_face(const FaceInput& in, double gamma, double fix, double* f) {
  const double gm1 = gamma - 1.0;
  const double gfac = gamma / gm1;

  const double unl = in.ul * in.nx + in.vl * in.ny;
  const double utl = in.vl * in.nx - in.ul * in.ny;
  const double unr = in.ur * in.nx + in.vr * in.ny;
  const double utr = in.vr * in.nx - in.ur * in.ny;
  const double hl = gfac * (in.pl / in.rl) + 0.5 * (in.ul * in.ul + in.vl * in.vl);
  const double hr = gfac * (in.pr / in.rr) + 0.5 * (in.ur * in.ur + in.vr * in.vr);

  const double ml = in.rl * unl;
  const double mr = in.rr * unr;

  const double sl = std::sqrt(in.rl);
  const double sr = std::sqrt(in.rr);
  const double inv = 1.0 / (sl + sr);
  const double un = (sl * unl + sr * unr) * inv;
  const double ut = (sl * utl + sr * utr) * inv;
  const double h = (sl * hl + sr * hr) * inv;
  const double rho = sl * sr;
  const double q2 = un * un + ut * ut;
  const double c2 = gm1 * (h - 0.5 * q2);
  const double c = std::sqrt(c2);

  const double dp = in.pr - in.pl;
  const double dun = unr - unl;
  const double dut = utr - utl;
  const double drho = in.rr - in.rl;
  const double inv2c2 = 0.5 / c2;
  const double rc_dun = rho * c * dun;
  const double a1 = (dp - rc_dun) * inv2c2;
  const double a2 = drho - dp / c2;
  const double a3 = rho * dut;
  const double a4 = (dp + rc_dun) * inv2c2;

  double l1 = std::abs(un - c);
  const double l2 = std::abs(un);
  double l4 = std::abs(un + c);
  const double delta = fix * c;
  if (l1 < delta) l1 = (l1 * l1 + delta * delta) / (2.0 * delta);
  if (l4 < delta) l4 = (l4 * l4 + delta * delta) / (2.0 * delta);

  const double w1 = l1 * a1;
  const double w2 = l2 * a2;
  const double w3 = l2 * a3;
  const double w4 = l4 * a4;
  const double d0 = w1 + w2 + w4;
  const double dn = w1 * (un - c) + w2 * un + w4 * (un + c);
  const double dt = d0 * ut + w3;
  const double de = w1 * (h - un * c) + w2 * (0.5 * q2) + w3 * ut + w4 * (h + un * c);

  const double f0 = 0.5 * (ml + mr) - 0.5 * d0;
  const double fn = 0.5 * ((ml * unl + in.pl) + (mr * unr + in.pr)) - 0.5 * dn;
  const double ft = 0.5 * (ml * utl + mr * utr) - 0.5 * dt;
  const double fe = 0.5 * (ml * hl + mr * hr) - 0.5 * de;

  f[0] = f0;
  f[1] = fn * in.nx - ft * in.ny;
  f[2] = fn * in.ny + ft * in.nx;
  f[3] = fe;
  return c2 > 0.0;
}

inline void van_leer_face(const FaceInput& in, double gamma, double* f) {
  const double gm1 = gamma - 1.0;
  const double gfac = gamma / gm1;
  const double inv_gamma = 1.0 / gamma;
  const double efac = 1.0 / (2.0 * (gamma * gamma - 1.0));

  const double unl = in.ul * in.nx + in.vl * in.ny;
  const double utl = in.vl * in.nx - in.ul * in.ny;
  const double unr = in.ur * in.nx + in.vr * in.ny;
  const double utr = in.vr * in.nx - in.ur * in.ny;

  double fp[4];
  {
    const double c = std::sqrt(gamma * in.pl / in.rl);
    const double m = unl / c;
    if (m >= 1.0) {
      const double mass = in.rl * unl;
      const double h = gfac * (in.pl / in.rl) + 0.5 * (unl * unl + utl * utl);
      fp[0] = mass;
      fp[1] = mass * unl + in.pl;
      fp[2] = mass * utl;
      fp[3] = mass * h;
    } else if (m <= -1.0) {
      fp[0] = fp[1] = fp[2] = fp[3] = 0.0;
    } else {
      const double mass = 0.25 * in.rl * c * ((m + 1.0) * (m + 1.0));
      const double s = gm1 * unl + 2.0 * c;
      fp[0] = mass;
      fp[1] = mass * (s * inv_gamma);
      fp[2] = mass * utl;
      fp[3] = mass * (s * s * efac + 0.5 * (utl * utl));
    }
  }
  double fm[4];
  {
    const double c = std::sqrt(gamma * in.pr / in.rr);
    const double m = unr / c;
    if (m <= -1.0) {
      const double mass = in.rr * unr;
      const double h = gfac * (in.pr / in.rr) + 0.5 * (unr * unr + utr * utr);
      fm[0] = mass;
      fm[1] = mass * unr + in.pr;
      fm[2] = mass * utr;
      fm[3] = mass * h;
    } else if (m >= 1.0) {
      fm[0] = fm[1] = fm[2] = fm[3] = 0.0;
    } else {
      const double mass = -0.25 * in.rr * c * ((m - 1.0) * (m - 1.0));
      const double s = gm1 * unr - 2.0 * c;
      fm[0] = mass;
      fm[1] = mass * (s * inv_gamma);
      fm[2] = mass * utr;
      fm[3] = mass * (s * s * efac + 0.5 * (utr * utr));
    }
  }
  const double fn = fp[1] + fm[1];
  const double ft = fp[2] + fm[2];
  f[0] = fp[0] + fm[0];
  f[1] = fn * in.nx - ft * in.ny;
  f[2] = fn * in.ny + ft * in.nx;
  f[3] = fp[3] + fm[3];
}

}  // namespace shocklab::kernels::detail
