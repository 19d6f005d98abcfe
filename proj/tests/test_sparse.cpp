#include <stdexcept>
#include <cmath>
#include <doctest.h>

#include "curvelab/sparse.hpp"

using namespace curvelab;

namespace {
GridSpec unit(int n) {
  GridSpec s;
  s.nx = s.ny = n;
  s.lx = s.ly = 1.0;
  return s;
}
}  // namespace

TEST_CASE("generated collections verify as sparse") {
  GridSpec amb = unit(128);
  SparseCollection coll =
      generate_sparse_family(amb, Rect{0.0, 0.0, 1.0, 1.0}, 1, 3, {1.0, 2.0},
                             0.25);
  CHECK(coll.cubes.size() > 0);
  SparsityReport rep = verify_sparsity(coll);
  CHECK(rep.ok);
  CHECK(rep.disjoint);
  CHECK(rep.worst_ratio >= 0.25 - 1e-12);
}

TEST_CASE("an unreachable density throws") {
  GridSpec amb = unit(64);
  // delta close to 1 cannot be met by disjoint claims across three
  // nested generations.
  CHECK_THROWS_AS(generate_sparse_family(amb, Rect{0.0, 0.0, 1.0, 1.0}, 1, 3,
                                         {1.0, 2.0}, 0.95),
                  std::runtime_error);
}

TEST_CASE("sparse form of indicators reduces to the measure sum") {
  GridSpec amb = unit(64);
  SparseCollection coll =
      generate_sparse_family(amb, Rect{0.0, 0.0, 1.0, 1.0}, 1, 2, {1.0, 1.0},
                             0.25);
  ScalarField2D one(amb, 1.0);
  double total = 0.0;
  for (const AnisoCube& q : coll.cubes) total += q.measure();
  // <1>_P = 1 for every P, so Lambda(1, 1) = sum |P| for any exponents.
  CHECK(sparse_form(one, one, coll, 1.0, 1.0) ==
        doctest::Approx(total).epsilon(1e-10));
  CHECK(sparse_form(one, one, coll, 2.0, 3.0) ==
        doctest::Approx(total).epsilon(1e-10));
  CHECK_THROWS_AS(sparse_form(one, one, coll, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("sparse form is monotone in the exponents") {
  // By power-mean monotonicity <|f|^r>^{1/r} grows with r pointwise per
  // cube, hence so does the form.
  GridSpec amb = unit(64);
  SparseCollection coll =
      generate_sparse_family(amb, Rect{0.0, 0.0, 1.0, 1.0}, 1, 2, {1.0, 2.0},
                             0.25);
  ScalarField2D f = field_from_fn(
      amb, [](double x, double y) { return std::sin(13.0 * x) + y; });
  ScalarField2D g = field_from_fn(
      amb, [](double x, double y) { return std::cos(7.0 * (x - y)); });
  double prev = 0.0;
  for (double r : {1.0, 1.5, 2.0, 3.0}) {
    double v = sparse_form(f, g, coll, r, r);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("domination ratio handles the degenerate cases") {
  CHECK(domination_ratio(2.0, 4.0) == doctest::Approx(0.5));
  CHECK(domination_ratio(0.0, 0.0) == 0.0);
  CHECK(domination_ratio(1e-15, 0.0) == 0.0);
  CHECK_THROWS_AS(domination_ratio(1.0, 0.0), std::invalid_argument);
}
