#include <stdexcept>
#include <cmath>
#include <cstdio>
#include <doctest.h>

#include "curvelab/cubes.hpp"
#include "curvelab/io.hpp"
#include "curvelab/oscillation.hpp"
#include "curvelab/presets.hpp"

using namespace curvelab;

namespace {
GridSpec unit(int n) {
  GridSpec s;
  s.nx = s.ny = n;
  s.lx = s.ly = 1.0;
  return s;
}
}  // namespace

TEST_CASE("smooth random preset: deterministic, mean zero, band limited") {
  GridSpec s = unit(64);
  ScalarField2D a = preset_smooth_random(s, 77, 4, 2.0);
  ScalarField2D b = preset_smooth_random(s, 77, 4, 2.0);
  ScalarField2D c = preset_smooth_random(s, 78, 4, 2.0);
  double diff_same = 0.0, diff_other = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    diff_same += std::abs(a.values()[k] - b.values()[k]);
    diff_other += std::abs(a.values()[k] - c.values()[k]);
    mean += a.values()[k];
  }
  CHECK(diff_same == 0.0);  // bit-exact reproducibility
  CHECK(diff_other > 0.0);
  CHECK(std::abs(mean) / s.size() < 1e-12);
  // Band limitation: the second derivative is bounded by (2 pi max_mode)^2
  // times the amplitude, so neighbour differences stay small.
  double max_step = 0.0;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i)
      max_step = std::max(max_step,
                          std::abs(a.at(i, j) - a.at_wrapped(i + 1, j)));
  CHECK(max_step < 2.0 * 3.1416 * 4 * a.max_abs() / s.nx * 1.5);
}

TEST_CASE("log-parabolic preset caps at the requested value") {
  GridSpec s = unit(128);
  double cap = 6.0;
  ScalarField2D b = preset_log_parabolic(s, {0.5, 0.5}, cap);
  CHECK(b.max_value() <= cap + 1e-12);
  CHECK(b.max_value() == doctest::Approx(cap));  // center cell hits the cap
  // Far from the center the anisotropic distance is ~ 1/2, value ~ log 2.
  CHECK(b.at(0, 0) < 1.5);
  CHECK(b.all_finite());
}

TEST_CASE("two-level preset oscillates at both scales") {
  GridSpec s = unit(128);
  ScalarField2D b = preset_two_level(s, 0.25, 1.0 / 32.0);
  CHECK(b.max_value() > 1.0);
  CHECK(b.min_value() < -1.0);
  CHECK(b.all_finite());
}

TEST_CASE("slice/planar presets evaluate finitely with their knobs") {
  GridSpec s;
  s.nx = s.ny = 128;
  s.lx = s.ly = 4.0;
  ScalarField2D sum = preset_jump_plus_spike(s, 2.0, 2.0, 12.0);
  CHECK(sum.all_finite());
  CHECK(sum.max_value() <= 1.0 + 12.0 + 1e-9);
  ScalarField2D prod = preset_sine_log_product(s, 2.0, 4);
  CHECK(prod.all_finite());
  // psi is capped at log(1 + m log 2).
  CHECK(prod.max_abs() <= std::log(1.0 + 4 * std::log(2.0)) + 1e-9);
}

TEST_CASE("normalize_family_bmo rescales the oscillation to one") {
  GridSpec s = unit(64);
  ScalarField2D b = preset_smooth_random(s, 5, 3, 2.0);
  CubeFamily fam =
      enumerate_family(Rect{0.0, 0.0, 1.0, 1.0}, 1, 3, {1.0, 1.0}, false);
  ScalarField2D n = normalize_family_bmo(b, fam);
  OscillationReport rep = bmo_norm(n, fam);
  CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(normalize_family_bmo(ScalarField2D(s, 2.0), fam),
                  std::invalid_argument);
}

TEST_CASE("binary field serialization roundtrips bit-exactly") {
  GridSpec s;
  s.nx = 16;
  s.ny = 8;
  s.lx = 2.0;
  s.ly = 1.0;
  s.origin = {-0.5, 0.25};
  ScalarField2D f = field_from_fn(
      s, [](double x, double y) { return std::sin(3.0 * x) * std::cos(y); });
  std::string path = "roundtrip_field.bin";
  save_field(f, path);
  ScalarField2D g = load_field(path);
  std::remove(path.c_str());
  CHECK(g.spec() == f.spec());
  REQUIRE(g.values().size() == f.values().size());
  for (std::size_t k = 0; k < f.values().size(); ++k)
    CHECK(g.values()[k] == f.values()[k]);
  CHECK_THROWS_AS(load_field("does_not_exist.bin"), std::runtime_error);
}

TEST_CASE("text exports carry the expected headers") {
  GridSpec s = unit(4);
  ScalarField2D f = field_from_fn(s, [](double x, double y) { return x + y; });
  std::string csv = field_to_csv(f);
  CHECK(csv.rfind("x,y,value", 0) == 0);
  std::size_t rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == s.size() + 1);
  std::string pgm = field_to_pgm(f);
  CHECK(pgm.substr(0, 2) == "P2");
  std::string path = "text_helper.txt";
  write_text_file(path, "hello\n");
  CHECK(read_text_file(path) == "hello\n");
  std::remove(path.c_str());
}
