#pragma once

#include <complex>
#include <string>
#include <vector>

#include "curvelab/curves.hpp"
#include "curvelab/grid.hpp"

namespace curvelab {

// Truncation and resolution of the principal-value quadrature. The
// symmetric (t, -t) pairing makes the cancellation structural; eps only
// controls resolution near 0 and T the outer truncation.
struct QuadratureSpec {
  double eps = 0.0;
  double T = 0.0;
  int nodes_per_dyad = 32;

  static QuadratureSpec defaults(const GridSpec& spec);
  void validate() const;
};

// Log-trapezoid nodes on [eps, T]: uniform in u = log t, so the weights
// are exact for the Haar measure dt/t.
struct QuadNodes {
  std::vector<double> t;
  std::vector<double> w;
};

QuadNodes make_log_nodes(const QuadratureSpec& q);

// Discrete periodic Hilbert transform H f(x) = p.v. integral f(x-t) dt/t,
// applied through the frequency symbol -i*pi*sign(xi).
std::vector<double> hilbert_1d(const std::vector<double>& f);

// Direct p.v. quadrature of H_gamma f(x) = p.v. integral f(x - gamma(t)) dt/t
// with symmetric pairing; off-grid samples are bilinear.
ScalarField2D curved_hilbert_direct(const ScalarField2D& f, const CurveSpec& c,
                                    const QuadratureSpec& q);

// Symbol table m(xi) = p.v. integral e^{-i xi . gamma(t)} dt/t on the
// grid's frequency lattice, built from the same quadrature as the direct
// route. Hermitian symmetry m(-xi) = conj m(xi) is enforced by
// construction. Note: only odd curves (gamma(-t) = -gamma(t)) have a
// purely imaginary symbol; the parabola does not.
struct MultiplierTable {
  GridSpec spec;
  QuadratureSpec quad;
  std::string curve_tag;
  std::vector<std::complex<double>> m;  // indexed like the field, DFT order

  double max_abs() const;
  std::string fingerprint() const;
};

MultiplierTable build_multiplier(const CurveSpec& c, const GridSpec& spec,
                                 const QuadratureSpec& q);

// Inverse transform of m(xi) * fhat(xi). Imaginary residue above
// 1e-9 (relative) signals broken Hermitian symmetry and is an error.
ScalarField2D curved_hilbert_fourier(const ScalarField2D& f,
                                     const MultiplierTable& m);
// Same with the adjoint symbol conj(m).
ScalarField2D curved_hilbert_fourier_adjoint(const ScalarField2D& f,
                                             const MultiplierTable& m);

// H_tau f(x, y) = (H f^y)(x): the 1-D transform applied to every row.
ScalarField2D line_hilbert(const ScalarField2D& f);

// Truncated transform along a torsion curve: p.v. integral over |t| <= 1.
// Requires q.T <= 1.
ScalarField2D torsion_hilbert_truncated(const ScalarField2D& f,
                                        const CurveSpec& c,
                                        const QuadratureSpec& q);

// Binary serialization of a multiplier table (for caching across runs).
std::string multiplier_to_bytes(const MultiplierTable& m);
MultiplierTable multiplier_from_bytes(const std::string& bytes);

}  // namespace curvelab
