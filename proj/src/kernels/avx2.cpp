// Compiled with -mavx2 (no FMA: contraction would change rounding relative to the scalar path).

#include <immintrin.h>

#include "face_flux.hpp"
#include "shocklab/kernels.hpp"

namespace shocklab::kernels::avx2 {

namespace {

using V = __m256d;

inline V set1(double x) { return _mm256_set1_pd(x); }
inline V load(std::span<const double> s, std::size_t i) { return _mm256_loadu_pd(s.data() + i); }
inline void store(std::span<double> s, std::size_t i, V v) { _mm256_storeu_pd(s.data() + i, v); }
inline V add(V a, V b) { return _mm256_add_pd(a, b); }
inline V sub(V a, V b) { return _mm256_sub_pd(a, b); }
inline V mul(V a, V b) { return _mm256_mul_pd(a, b); }
inline V div(V a, V b) { return _mm256_div_pd(a, b); }
inline V vsqrt(V a) { return _mm256_sqrt_pd(a); }
inline V vabs(V a) { return _mm256_andnot_pd(set1(-0.0), a); }
inline V lt(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
inline V ge(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_GE_OQ); }
inline V le(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
inline V gt(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
// mask ? b : a
inline V select(V mask, V a, V b) { return _mm256_blendv_pd(a, b, mask); }

detail::FaceInput load_one(const FaceStates& in, std::size_t i) {
  return {in.rho_l[i], in.u_l[i], in.v_l[i], in.p_l[i], in.rho_r[i], in.u_r[i],
          in.v_r[i],   in.p_r[i], in.nx[i],  in.ny[i]};
}

void store_one(const FaceFluxes& out, std::size_t i, const double* f) {
  out.mass[i] = f[0];
  out.mom_x[i] = f[1];
  out.mom_y[i] = f[2];
  out.energy[i] = f[3];
}

}  // namespace

int roe_flux(const FaceStates& in, double gamma, double entropy_fix, const FaceFluxes& out) {
  const std::size_t n = in.nx.size();
  const V half = set1(0.5);
  const V two = set1(2.0);
  const V gm1 = set1(gamma - 1.0);
  const V gfac = set1(gamma / (gamma - 1.0));
  const V fix = set1(entropy_fix);
  int bad = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const V rl = load(in.rho_l, i), ul = load(in.u_l, i), vl = load(in.v_l, i), pl = load(in.p_l, i);
    const V rr = load(in.rho_r, i), ur = load(in.u_r, i), vr = load(in.v_r, i), pr = load(in.p_r, i);
    const V nx = load(in.nx, i), ny = load(in.ny, i);

    const V unl = add(mul(ul, nx), mul(vl, ny));
    const V utl = sub(mul(vl, nx), mul(ul, ny));
    const V unr = add(mul(ur, nx), mul(vr, ny));
    const V utr = sub(mul(vr, nx), mul(ur, ny));
    const V hl = add(mul(gfac, div(pl, rl)), mul(half, add(mul(ul, ul), mul(vl, vl))));
    const V hr = add(mul(gfac, div(pr, rr)), mul(half, add(mul(ur, ur), mul(vr, vr))));
    const V ml = mul(rl, unl);
    const V mr = mul(rr, unr);

    const V sl = vsqrt(rl);
    const V sr = vsqrt(rr);
    const V inv = div(set1(1.0), add(sl, sr));
    const V un = mul(add(mul(sl, unl), mul(sr, unr)), inv);
    const V ut = mul(add(mul(sl, utl), mul(sr, utr)), inv);
    const V h = mul(add(mul(sl, hl), mul(sr, hr)), inv);
    const V rho = mul(sl, sr);
    const V q2 = add(mul(un, un), mul(ut, ut));
    const V c2 = mul(gm1, sub(h, mul(half, q2)));
    const V c = vsqrt(c2);
    bad += __builtin_popcount(~_mm256_movemask_pd(gt(c2, set1(0.0))) & 0xF);

    const V dp = sub(pr, pl);
    const V dun = sub(unr, unl);
    const V dut = sub(utr, utl);
    const V drho = sub(rr, rl);
    const V inv2c2 = div(half, c2);
    const V rc_dun = mul(mul(rho, c), dun);
    const V a1 = mul(sub(dp, rc_dun), inv2c2);
    const V a2 = sub(drho, div(dp, c2));
    const V a3 = mul(rho, dut);
    const V a4 = mul(add(dp, rc_dun), inv2c2);

    V l1 = vabs(sub(un, c));
    const V l2 = vabs(un);
    V l4 = vabs(add(un, c));
    const V delta = mul(fix, c);
    const V dd = mul(delta, delta);
    const V twod = mul(two, delta);
    l1 = select(lt(l1, delta), l1, div(add(mul(l1, l1), dd), twod));
    l4 = select(lt(l4, delta), l4, div(add(mul(l4, l4), dd), twod));

    const V w1 = mul(l1, a1);
    const V w2 = mul(l2, a2);
    const V w3 = mul(l2, a3);
    const V w4 = mul(l4, a4);
    const V d0 = add(add(w1, w2), w4);
    const V dn = add(add(mul(w1, sub(un, c)), mul(w2, un)), mul(w4, add(un, c)));
    const V dt = add(mul(d0, ut), w3);
    const V de = add(add(add(mul(w1, sub(h, mul(un, c))), mul(w2, mul(half, q2))), mul(w3, ut)),
                     mul(w4, add(h, mul(un, c))));

    const V f0 = sub(mul(half, add(ml, mr)), mul(half, d0));
    const V fn = sub(mul(half, add(add(mul(ml, unl), pl), add(mul(mr, unr), pr))), mul(half, dn));
    const V ft = sub(mul(half, add(mul(ml, utl), mul(mr, utr))), mul(half, dt));
    const V fe = sub(mul(half, add(mul(ml, hl), mul(mr, hr))), mul(half, de));

    store(out.mass, i, f0);
    store(out.mom_x, i, sub(mul(fn, nx), mul(ft, ny)));
    store(out.mom_y, i, add(mul(fn, ny), mul(ft, nx)));
    store(out.energy, i, fe);
  }
  double f[4];
  for (; i < n; ++i) {
    if (!detail::roe_face(load_one(in, i), gamma, entropy_fix, f)) ++bad;
    store_one(out, i, f);
  }
  return bad;
}

void van_leer_flux(const FaceStates& in, double gamma, const FaceFluxes& out) {
  const std::size_t n = in.nx.size();
  const V one = set1(1.0);
  const V half = set1(0.5);
  const V quarter = set1(0.25);
  const V mquarter = set1(-0.25);
  const V two = set1(2.0);
  const V vgamma = set1(gamma);
  const V gm1 = set1(gamma - 1.0);
  const V gfac = set1(gamma / (gamma - 1.0));
  const V inv_gamma = set1(1.0 / gamma);
  const V efac = set1(1.0 / (2.0 * (gamma * gamma - 1.0)));
  const V mone = set1(-1.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const V rl = load(in.rho_l, i), ul = load(in.u_l, i), vl = load(in.v_l, i), pl = load(in.p_l, i);
    const V rr = load(in.rho_r, i), ur = load(in.u_r, i), vr = load(in.v_r, i), pr = load(in.p_r, i);
    const V nx = load(in.nx, i), ny = load(in.ny, i);

    const V unl = add(mul(ul, nx), mul(vl, ny));
    const V utl = sub(mul(vl, nx), mul(ul, ny));
    const V unr = add(mul(ur, nx), mul(vr, ny));
    const V utr = sub(mul(vr, nx), mul(ur, ny));

    V fp0, fp1, fp2, fp3;
    {
      const V c = vsqrt(div(mul(vgamma, pl), rl));
      const V m = div(unl, c);
      const V mass_s = mul(mul(mul(quarter, rl), c), mul(add(m, one), add(m, one)));
      const V s = add(mul(gm1, unl), mul(two, c));
      const V sp0 = mass_s;
      const V sp1 = mul(mass_s, mul(s, inv_gamma));
      const V sp2 = mul(mass_s, utl);
      const V sp3 = mul(mass_s, add(mul(mul(s, s), efac), mul(half, mul(utl, utl))));

      const V mass_p = mul(rl, unl);
      const V h = add(mul(gfac, div(pl, rl)), mul(half, add(mul(unl, unl), mul(utl, utl))));
      const V pp1 = add(mul(mass_p, unl), pl);
      const V pp2 = mul(mass_p, utl);
      const V pp3 = mul(mass_p, h);

      const V sup = ge(m, one);
      const V back = le(m, mone);
      fp0 = _mm256_andnot_pd(back, select(sup, sp0, mass_p));
      fp1 = _mm256_andnot_pd(back, select(sup, sp1, pp1));
      fp2 = _mm256_andnot_pd(back, select(sup, sp2, pp2));
      fp3 = _mm256_andnot_pd(back, select(sup, sp3, pp3));
    }
    V fm0, fm1, fm2, fm3;
    {
      const V c = vsqrt(div(mul(vgamma, pr), rr));
      const V m = div(unr, c);
      const V mass_s = mul(mul(mul(mquarter, rr), c), mul(sub(m, one), sub(m, one)));
      const V s = sub(mul(gm1, unr), mul(two, c));
      const V sm0 = mass_s;
      const V sm1 = mul(mass_s, mul(s, inv_gamma));
      const V sm2 = mul(mass_s, utr);
      const V sm3 = mul(mass_s, add(mul(mul(s, s), efac), mul(half, mul(utr, utr))));

      const V mass_p = mul(rr, unr);
      const V h = add(mul(gfac, div(pr, rr)), mul(half, add(mul(unr, unr), mul(utr, utr))));
      const V pm1 = add(mul(mass_p, unr), pr);
      const V pm2 = mul(mass_p, utr);
      const V pm3 = mul(mass_p, h);

      const V sup = le(m, mone);
      const V away = ge(m, one);
      fm0 = _mm256_andnot_pd(away, select(sup, sm0, mass_p));
      fm1 = _mm256_andnot_pd(away, select(sup, sm1, pm1));
      fm2 = _mm256_andnot_pd(away, select(sup, sm2, pm2));
      fm3 = _mm256_andnot_pd(away, select(sup, sm3, pm3));
    }
    const V fn = add(fp1, fm1);
    const V ft = add(fp2, fm2);
    store(out.mass, i, add(fp0, fm0));
    store(out.mom_x, i, sub(mul(fn, nx), mul(ft, ny)));
    store(out.mom_y, i, add(mul(fn, ny), mul(ft, nx)));
    store(out.energy, i, add(fp3, fm3));
  }
  double f[4];
  for (; i < n; ++i) {
    detail::van_leer_face(load_one(in, i), gamma, f);
    store_one(out, i, f);
  }
}

void rk_combine(std::span<double> out, std::span<const double> a, double a_weight,
                std::span<const double> b, double b_weight, std::span<const double> r,
                std::span<const double> dt) {
  const V wa = set1(a_weight);
  const V wb = set1(b_weight);
  std::size_t i = 0;
  for (; i + 4 <= out.size(); i += 4)
    store(out, i, add(mul(wa, load(a, i)), mul(wb, add(load(b, i), mul(load(dt, i), load(r, i))))));
  for (; i < out.size(); ++i) out[i] = a_weight * a[i] + b_weight * (b[i] + dt[i] * r[i]);
}

double sum_squares(std::span<const double> x) {
  V acc = set1(0.0);
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const V v = load(x, i);
    acc = add(acc, mul(v, v));
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (int k = 0; i < x.size(); ++i, ++k) s[k] += x[i] * x[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace shocklab::kernels::avx2
