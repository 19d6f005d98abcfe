#include <stdexcept>
#include <cmath>
#include <doctest.h>

#include "curvelab/oscillation.hpp"

using namespace curvelab;

namespace {
GridSpec unit(int n) {
  GridSpec s;
  s.nx = s.ny = n;
  s.lx = s.ly = 1.0;
  return s;
}
}  // namespace

TEST_CASE("bmo of a linear ramp over a single square is width/4") {
  // For b(x) = x on a cube of side L, mean = L/2 and
  // (1/L^2) int |x - L/2| = L/4.
  GridSpec s = unit(128);
  ScalarField2D b = field_from_fn(s, [](double x, double) { return x; });
  CubeFamily fam;
  fam.window = Rect{0.25, 0.25, 0.75, 0.75};
  fam.alpha = {1.0, 1.0};
  fam.scales = {0.5};
  fam.cubes = {AnisoCube{{0.25, 0.25}, 0.5, {1.0, 1.0}}};
  fam.scale_index = {0};
  OscillationReport rep = bmo_norm(b, fam);
  CHECK(rep.value == doctest::Approx(0.5 / 4.0).epsilon(1e-4));
  CHECK(rep.per_scale.size() == 1);
  CHECK(rep.per_scale[0].second == doctest::Approx(rep.value));
}

TEST_CASE("bmo picks the worst cube and records it") {
  GridSpec s = unit(64);
  // A step in the left half only; the right-half cube sees a constant.
  ScalarField2D b =
      field_from_fn(s, [](double x, double) { return x < 0.25 ? 1.0 : 0.0; });
  CubeFamily fam;
  fam.window = Rect{0.0, 0.0, 1.0, 1.0};
  fam.alpha = {1.0, 1.0};
  fam.scales = {0.5};
  // Keep the right cube away from x = 1 so no cell wraps back onto the
  // step at the periodic seam.
  fam.cubes = {AnisoCube{{0.0, 0.25}, 0.5, {1.0, 1.0}},
               AnisoCube{{0.375, 0.25}, 0.5, {1.0, 1.0}}};
  fam.scale_index = {0, 0};
  std::vector<double> per_cube;
  OscillationReport rep = bmo_norm_detailed(b, fam, &per_cube);
  REQUIRE(per_cube.size() == 2);
  // Left cube: half ones, half zeros -> mean 1/2, mean abs dev 1/2
  // (up to the half-cell clipping at the cube edges).
  CHECK(per_cube[0] == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(per_cube[1] == doctest::Approx(0.0));
  CHECK(rep.argmax.corner.x == doctest::Approx(0.0));
  std::string csv = rep.to_csv(fam, per_cube);
  CHECK(csv.rfind("scale,", 0) == 0);
}

TEST_CASE("row_oscillation against a hand-computed step") {
  GridSpec s = unit(4);
  ScalarField2D b(s);
  // Row 0: values 1, 1, -1, -1 -> mean 0, mean abs dev 1 on the full row.
  b.at(0, 0) = 1.0;
  b.at(1, 0) = 1.0;
  b.at(2, 0) = -1.0;
  b.at(3, 0) = -1.0;
  // Interval spans exactly the four cells (cell-centered: [-dx/2, 1-dx/2]).
  double d = s.dx();
  CHECK(row_oscillation(b, 0, -0.5 * d, 1.0 - 0.5 * d) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Constant sub-interval has zero oscillation.
  CHECK(row_oscillation(b, 0, -0.5 * d, 0.5 * d) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(row_oscillation(b, 0, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("slice_bmo_inf vanishes for fields constant along rows") {
  GridSpec s = unit(32);
  ScalarField2D b =
      field_from_fn(s, [](double, double y) { return std::sin(7.0 * y); });
  CHECK(slice_bmo_inf(b, 1, 3) == doctest::Approx(0.0));
  // A row-dependent step is seen by some interval.
  ScalarField2D c =
      field_from_fn(s, [](double x, double) { return x < 0.5 ? 1.0 : -1.0; });
  CHECK(slice_bmo_inf(c, 1, 3) > 0.4);
  CHECK_THROWS_AS(slice_bmo_inf(b, 3, 1), std::invalid_argument);
}

namespace {
GridSpec flow_domain() {
  GridSpec s;
  s.nx = s.ny = 256;
  s.origin = {-4.0, -8.0};
  s.lx = 6.0;
  s.ly = 10.0;
  return s;
}
}  // namespace

TEST_CASE("testing deviation vanishes for constant symbols") {
  GridSpec s = flow_domain();
  ScalarField2D b(s, 3.25);
  AnisoCube Q{{0.0, 0.0}, 0.25, {1.0, 2.0}};
  TestingParams p;
  p.quad = QuadratureSpec::defaults(s);
  CHECK(testing_deviation(b, Q, CurveSpec::parabola(), p) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("testing deviation equals the level gap for two-plateau symbols") {
  // b = c_Q on a neighbourhood of Q and c_E on a neighbourhood of E_Q:
  // every trajectory average is c_E, every cube sample c_Q, so the
  // deviation is exactly |c_Q - c_E|.
  GridSpec s = flow_domain();
  CurveSpec c = CurveSpec::parabola();
  AnisoCube Q{{0.0, 0.0}, 0.25, {1.0, 2.0}};
  FlowSet E = flow_set(c, Q, s, 4);
  Rect bb = E.raster.bbox();
  Rect qr = Q.rect();
  double c_q = 2.0, c_e = -1.0;
  ScalarField2D b = field_from_fn(s, [&](double x, double y) {
    Point2 pnt{x, y};
    Rect qpad{qr.x0 - 0.1, qr.y0 - 0.1, qr.x1 + 0.1, qr.y1 + 0.1};
    Rect epad{bb.x0 - 0.1, bb.y0 - 0.1, bb.x1 + 0.1, bb.y1 + 0.1};
    if (qpad.contains(pnt)) return c_q;
    if (epad.contains(pnt)) return c_e;
    return 0.0;
  });
  TestingParams p;
  p.quad = QuadratureSpec::defaults(s);
  CHECK(testing_deviation(b, Q, c, p) ==
        doctest::Approx(std::abs(c_q - c_e)).epsilon(1e-9));
}

TEST_CASE("testing_norm reports per-scale maxima over a family") {
  GridSpec s = flow_domain();
  ScalarField2D b = field_from_fn(s, [](double x, double) { return 0.1 * x; });
  CubeFamily fam;
  fam.window = Rect{0.0, 0.0, 1.0, 1.0};
  fam.alpha = {1.0, 2.0};
  fam.scales = {0.25};
  fam.cubes = {AnisoCube{{0.0, 0.0}, 0.25, {1.0, 2.0}},
               AnisoCube{{0.5, 0.5}, 0.25, {1.0, 2.0}}};
  fam.scale_index = {0, 0};
  TestingParams p;
  p.quad = QuadratureSpec::defaults(s);
  OscillationReport rep = testing_norm(b, fam, CurveSpec::parabola(), p);
  // For b = 0.1 x the trajectory sits at distance ~ 9.5 ell left of the
  // cube, so the deviation is about 0.1 * 9.5 * ell ~ 0.24.
  CHECK(rep.value > 0.1);
  CHECK(rep.value < 0.4);
  CHECK(rep.per_scale[0].second == doctest::Approx(rep.value));
}
