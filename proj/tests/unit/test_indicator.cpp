#include <algorithm>
#include <random>

#include "doctest.h"
#include "shocklab/euler.hpp"
#include "shocklab/indicator.hpp"

using namespace shocklab;

namespace {

Mesh box3() {
  BoxSpec b;
  b.nx = 3;
  b.ny = 3;
  return generate_box(b);
}

int face_between(const Mesh& m, int a, int b) {
  for (int fi : m.faces_of(a)) {
    const Face& f = m.faces[fi];
    if ((f.left == a && f.right == b) || (f.left == b && f.right == a)) return fi;
  }
  return -1;
}

// Minimum over the faces of both volumes, evaluated by brute force from the pressure field.
double brute_force_omega(const Mesh& m, int face, const std::vector<double>& p, const IndicatorOptions& opts) {
  const Face& f = m.faces[face];
  double w = 1.0;
  for (int fi = 0; fi < m.num_faces(); ++fi) {
    const Face& g = m.faces[fi];
    const bool touches = g.left == f.left || g.right == f.left ||
                         (!f.is_boundary() && (g.left == f.right || g.right == f.right));
    if (!touches) continue;
    const double pl = p[g.left];
    const double pr = g.is_boundary() ? (g.tag == BoundaryTag::inflow ? opts.freestream_pressure : pl) : p[g.right];
    w = std::min(w, std::min(pl / pr, pr / pl));
  }
  return w;
}

}  // namespace

TEST_CASE("face pressure ratio") {
  CHECK(face_pressure_ratio(1.0, 1.0) == 1.0);
  CHECK(face_pressure_ratio(2.0, 1.0) == 0.5);
  CHECK(face_pressure_ratio(1.0, 2.0) == 0.5);
  CHECK(face_pressure_ratio(10.0, 1.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(face_pressure_ratio(0.0, 1.0), PositivityError);
  CHECK_THROWS_AS(face_pressure_ratio(1.0, -2.0), PositivityError);
}

TEST_CASE("ghost pressure convention") {
  IndicatorOptions o;
  o.freestream_pressure = 3.0;
  CHECK(ghost_pressure(BoundaryTag::wall, 2.0, o) == 2.0);
  CHECK(ghost_pressure(BoundaryTag::symmetry, 2.0, o) == 2.0);
  CHECK(ghost_pressure(BoundaryTag::outflow, 2.0, o) == 2.0);
  CHECK(ghost_pressure(BoundaryTag::inflow, 2.0, o) == 3.0);
}

TEST_CASE("stencil minimum over both volumes") {
  const Mesh m = box3();
  std::vector<double> p(9, 1.0);
  p[3] = 1.25;  // ratio 0.8 against the centre
  p[2] = 2.0;   // ratio 0.5 against the right neighbour
  const int f = face_between(m, 4, 5);
  REQUIRE(f >= 0);
  REQUIRE(m.faces_of(4).size() + m.faces_of(5).size() - 1 == 7);
  CHECK(stencil_weight(f, m, p) == 0.5);
  CHECK(face_weights(m, p)[f] == 0.5);

  p[2] = 1.0;
  CHECK(stencil_weight(f, m, p) == 0.8);
}

TEST_CASE("indicator properties on random pressure fields") {
  BoxSpec b;
  b.nx = 6;
  b.ny = 5;
  b.triangles = true;
  b.tags = {BoundaryTag::wall, BoundaryTag::outflow, BoundaryTag::symmetry, BoundaryTag::inflow};
  const Mesh m = generate_box(b);
  IndicatorOptions opts;
  opts.freestream_pressure = 1.3;
  std::mt19937_64 rng(61);
  std::lognormal_distribution<double> pd(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(m.num_volumes());
    for (double& x : p) x = pd(rng);
    const std::vector<double> w = face_weights(m, p, opts);
    for (int fi = 0; fi < m.num_faces(); ++fi) {
      CHECK(w[fi] > 0.0);
      CHECK(w[fi] <= 1.0);
      CHECK(w[fi] == stencil_weight(fi, m, p, opts));
      CHECK(w[fi] == doctest::Approx(brute_force_omega(m, fi, p, opts)).epsilon(1e-15));
    }
    const double a = scale(rng);
    std::vector<double> q(p);
    for (double& x : q) x *= a;
    IndicatorOptions scaled = opts;
    scaled.freestream_pressure *= a;
    const std::vector<double> ws = face_weights(m, q, scaled);
    for (int fi = 0; fi < m.num_faces(); ++fi) CHECK(ws[fi] == doctest::Approx(w[fi]).epsilon(1e-14));
  }
}

TEST_CASE("uniform pressure gives omega = 1 everywhere") {
  const Mesh m = generate_grid(GridKind::irregular_tri, GridParams{6, 10, 1.0, 4.0, 2});
  std::vector<double> p(m.num_volumes(), 2.5);
  IndicatorOptions opts;
  opts.freestream_pressure = 2.5;
  for (double w : face_weights(m, p, opts)) CHECK(w == 1.0);
}

TEST_CASE("sharpening a stencil jump never raises omega") {
  const Mesh m = box3();
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> r(0.05, 1.0), cut(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> ratios(m.num_faces());
    for (double& x : ratios) x = r(rng);
    const int target = std::uniform_int_distribution<int>(0, m.num_faces() - 1)(rng);
    const auto before = volume_min_ratio(m, ratios);
    ratios[target] *= cut(rng);
    const auto after = volume_min_ratio(m, ratios);
    for (int fi = 0; fi < m.num_faces(); ++fi) {
      const Face& f = m.faces[fi];
      const double wb = f.is_boundary() ? before[f.left] : std::min(before[f.left], before[f.right]);
      const double wa = f.is_boundary() ? after[f.left] : std::min(after[f.left], after[f.right]);
      CHECK(wa <= wb);
    }
  }
}

TEST_CASE("exponent steepens the ratio") {
  const Mesh m = box3();
  std::vector<double> p(9, 1.0);
  p[4] = 2.0;
  IndicatorOptions o;
  o.exponent = 2.0;
  const auto w = face_weights(m, p, o);
  CHECK(*std::min_element(w.begin(), w.end()) == doctest::Approx(0.25));
}
