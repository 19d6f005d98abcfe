#include <stdexcept>
#include <cmath>
#include <doctest.h>
#include <numbers>

#include "curvelab/weights.hpp"

using namespace curvelab;

namespace {
GridSpec unit(int n) {
  GridSpec s;
  s.nx = s.ny = n;
  s.lx = s.ly = 1.0;
  return s;
}

CubeFamily single_cube(Rect r) {
  CubeFamily fam;
  fam.window = r;
  fam.alpha = {1.0, 1.0};
  fam.scales = {r.width()};
  fam.cubes = {AnisoCube{{r.x0, r.y0}, r.width(), {1.0, 1.0}}};
  fam.scale_index = {0};
  return fam;
}
}  // namespace

TEST_CASE("weight powers compose and the overflow guard trips") {
  GridSpec s = unit(16);
  ScalarField2D b = field_from_fn(
      s, [](double x, double y) { return std::sin(5.0 * x) + y; });
  Weight w = exp_weight(b, 0.7);
  ScalarField2D prod = mul(w.power(0.5), w.power(-0.5));
  for (double v : prod.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(exp_weight(b, 100.0), std::invalid_argument);
}

TEST_CASE("A_p of a constant weight is 1, and A_p >= 1 always") {
  GridSpec s = unit(32);
  CubeFamily fam = single_cube(Rect{0.25, 0.25, 0.75, 0.75});
  Weight one = exp_weight(ScalarField2D(s, 3.0), 0.0);
  CHECK(ap_characteristic(one, fam, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  Weight w = exp_weight(
      field_from_fn(s, [](double x, double) { return std::sin(9.0 * x); }),
      0.5);
  for (double p : {1.5, 2.0, 3.0})
    CHECK(ap_characteristic(w, fam, p) >= 1.0 - 1e-12);
}

TEST_CASE("A_2 of a two-valued weight matches the closed form") {
  // w = a on the left half of the cube and b on the right:
  // <w> = (a+b)/2, <1/w> = (1/a+1/b)/2, so [w]_{A_2} = (a+b)^2/(4ab).
  GridSpec s = unit(64);
  double a = 4.0, c = 0.25;
  // The jump at x = 0.5 falls on a cell boundary (node 32 is the first
  // cell of the right plateau only if we split at a half-cell offset).
  double split = 0.5 - s.dx() / 2;
  ScalarField2D b = field_from_fn(
      s, [&](double x, double) { return x < split ? std::log(a) : std::log(c); });
  Weight w{b};
  CubeFamily fam = single_cube(Rect{split - 0.25, 0.25, split + 0.25, 0.75});
  double expect = (a + c) * (a + c) / (4.0 * a * c);
  CHECK(ap_characteristic(w, fam, 2.0) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("reverse Holder of a constant is 1 and grows with roughness") {
  GridSpec s = unit(32);
  CubeFamily fam = single_cube(Rect{0.25, 0.25, 0.75, 0.75});
  Weight one = exp_weight(ScalarField2D(s, -1.0), 0.0);
  CHECK(rh_characteristic(one, fam, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  Weight rough = exp_weight(
      field_from_fn(s, [](double x, double y) { return std::sin(20.0 * x * y); }),
      1.0);
  CHECK(rh_characteristic(rough, fam, 2.0) > 1.0);
}

TEST_CASE("weighted norm with the trivial weight equals the flat norm") {
  GridSpec s = unit(32);
  Weight one = exp_weight(ScalarField2D(s, 0.0), 1.0);
  NormEstimate est =
      weighted_operator_norm(make_line_op(), one, s, 100, 1e-12, 11);
  CHECK(est.converged);
  CHECK(est.upper == doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("weighted norm is finite and above the flat norm for a real weight") {
  GridSpec s = unit(32);
  ScalarField2D b = field_from_fn(s, [](double x, double y) {
    return std::sin(2.0 * std::numbers::pi * x) *
           std::sin(2.0 * std::numbers::pi * y);
  });
  Weight w = exp_weight(b, 0.8);
  NormEstimate est =
      weighted_operator_norm(make_line_op(), w, s, 400, 1e-10, 13);
  // Similarity preserves the spectrum, so the weighted norm dominates the
  // spectral radius pi; allow slack for unconverged power-iteration tails.
  CHECK(est.upper >= std::numbers::pi - 1e-3);
  CHECK(est.upper < 100.0);
}
