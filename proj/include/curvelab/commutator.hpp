#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "curvelab/cubes.hpp"
#include "curvelab/curves.hpp"
#include "curvelab/grid.hpp"
#include "curvelab/oscillation.hpp"
#include "curvelab/transforms.hpp"

namespace curvelab {

// Real and imaginary parts of a complex field on a shared grid.
struct ComplexField2D {
  ScalarField2D re;
  ScalarField2D im;
};

// A linear operator with its adjoint, both as closures over shared state
// (e.g. a multiplier table).
struct OperatorHandle {
  std::function<ScalarField2D(const ScalarField2D&)> apply;
  std::function<ScalarField2D(const ScalarField2D&)> adjoint_apply;
  std::string label;
};

// Fourier-route operator from a prebuilt symbol table.
OperatorHandle make_fourier_op(const MultiplierTable& m);

// Row-wise 1-D Hilbert transform (anti-self-adjoint: H* = -H).
OperatorHandle make_line_op();

// [b, T] f = b (T f) - T (b f).
ScalarField2D commutator_apply(const ScalarField2D& b, const OperatorHandle& T,
                               const ScalarField2D& f);

// The commutator as an operator; adjoint is [b, T]* = -[b, T*].
OperatorHandle make_commutator_op(const ScalarField2D& b,
                                  const OperatorHandle& T);

// Iterated commutator [b, [b, ... [b, T]]] with k levels, 1 <= k <= 4.
ScalarField2D higher_commutator_apply(const ScalarField2D& b,
                                      const OperatorHandle& T,
                                      const ScalarField2D& f, int k);

// The conjugated operator g(z) = e^{z b / 2} T (e^{-z b / 2} f).
// Rejects |Re z| * max|b| > 80 (exp overflow guard).
ComplexField2D conjugated_apply(const ScalarField2D& b, const OperatorHandle& T,
                                std::complex<double> z,
                                const ScalarField2D& f);

// Trapezoid contour of M points on the circle |z| = radius; the
// trapezoid rule on a circle converges spectrally in M for analytic
// integrands.
struct ContourSpec {
  double radius = 1.0;
  int M = 32;

  void validate(double b_max_abs) const;
};

// Cauchy-integral evaluation of the k-th iterated commutator:
//   [b, .^k, [b, T]] f = (2^k k! / M) sum_j g(z_j) / z_j^k
// with g as in conjugated_apply. The imaginary residue must stay below
// 1e-6 * ||result||_2, else throws (diagnostic for a broken contour).
ScalarField2D contour_commutator(const ScalarField2D& b,
                                 const OperatorHandle& T,
                                 const ScalarField2D& f, int k,
                                 const ContourSpec& contour);

struct NormEstimate {
  double upper = 0.0;    // converged power-iteration value
  double lower = 0.0;    // certified Rayleigh lower bound
  int iterations = 0;
  double residual = 0.0;  // last relative change of the eigenvalue
  bool converged = false;
};

// L2 -> L2 operator norm by power iteration on T*T with a seeded random
// start. The Rayleigh quotient is always a valid lower bound; "upper" is
// the converged estimate (residual-qualified), not a certificate.
NormEstimate operator_norm_upper(const OperatorHandle& T, const GridSpec& spec,
                                 int max_iter = 200, double tol = 1e-8,
                                 std::uint64_t seed = 1);

// One row per probed cube of the flow-based lower bound on ||[b, T]||.
struct TestingProbe {
  AnisoCube cube;
  double mu = 0.0;          // Haar measure of the time set at the center
  double deviation = 0.0;   // testing deviation of b on the cube
  double rayleigh = 0.0;    // ||[b,T] chi_{E_Q}||_2 / ||chi_{E_Q}||_2
};

struct TestingLowerBound {
  double value = 0.0;  // max Rayleigh quotient over the family
  AnisoCube argmax;
  std::vector<TestingProbe> probes;

  std::string to_csv() const;
};

// Lower bound on ||[b, T]||_{L2 -> L2} by testing against flow-set
// indicators chi_{E_Q} over the family; also records the per-cube
// testing deviation for chain comparisons.
TestingLowerBound operator_norm_lower_testing(const ScalarField2D& b,
                                              const OperatorHandle& T,
                                              const CubeFamily& fam,
                                              const CurveSpec& c,
                                              const TestingParams& p);

// Materializes T as a dense size x size matrix (row-major, column k is
// T applied to the k-th basis vector). For small grids only.
std::vector<double> dense_matrix(const OperatorHandle& T, const GridSpec& spec);

}  // namespace curvelab
