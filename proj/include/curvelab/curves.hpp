#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "curvelab/cubes.hpp"
#include "curvelab/grid.hpp"

namespace curvelab {

enum class CurveKind { Parabola, Monomial, Line, Torsion };

// A plane curve: the parabola gamma(t) = (t, t^2), a general monomial
// curve with exponents alpha and sign vectors eps (t >= 0) / eps_neg
// (t < 0), the horizontal line, or a sampled torsion curve on [-1, 1].
struct CurveSpec {
  CurveKind kind = CurveKind::Parabola;

  // Monomial data (also backs the parabola and the line).
  std::array<double, 2> alpha{1.0, 2.0};
  std::array<int, 2> eps{1, 1};
  std::array<int, 2> eps_neg{-1, 1};

  // Torsion data: strictly increasing nodes in [-1, 1] with curve values
  // and first/second derivatives at each node.
  std::vector<double> nodes;
  std::vector<Point2> samples;
  std::vector<Point2> deriv1;
  std::vector<Point2> deriv2;

  static CurveSpec parabola();
  static CurveSpec line();
  static CurveSpec monomial(std::array<double, 2> alpha, std::array<int, 2> eps,
                            std::array<int, 2> eps_neg);
  // Validates non-vanishing torsion det(nu', nu'') at every node
  // (tolerance 1e-8).
  static CurveSpec torsion(std::vector<double> nodes,
                           std::vector<Point2> samples,
                           std::vector<Point2> deriv1,
                           std::vector<Point2> deriv2);

  // True when gamma(-t) = -gamma(t); only then is the transform
  // antisymmetric and its symbol purely imaginary.
  bool is_odd() const;

  std::string tag() const;
};

Point2 eval_curve(const CurveSpec& c, double t);

// Boolean raster on a sub-lattice of the ambient grid (cells of size
// dx/refinement x dy/refinement, grid-aligned).
struct RasterMask {
  double x0 = 0.0, y0 = 0.0;   // lower-left corner of cell (0, 0)
  double cx = 0.0, cy = 0.0;   // cell sizes
  int nxc = 0, nyc = 0;
  std::vector<std::uint8_t> cells;

  bool cell(int i, int j) const {
    return cells[static_cast<std::size_t>(j) * nxc + i] != 0;
  }
  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * cx * cy; }
  bool contains_point(Point2 p) const;
  Rect bbox() const {
    return Rect{x0, y0, x0 + nxc * cx, y0 + nyc * cy};
  }
};

// Flow set E_Q = {x - gamma(t) : x in Q, t in [t0, t1]} with the fixed
// window [t0, t1] = [9 ell(Q), 10 ell(Q)]. Membership is decided
// analytically for monotone curves (monomials over positive time) and by a
// forward time-march for sampled torsion curves; the raster is the
// measurable/exportable artifact.
struct FlowSet {
  AnisoCube source;
  CurveSpec curve;
  double t0 = 0.0, t1 = 0.0;
  RasterMask raster;
  double measure = 0.0;

  // Exact membership test (raster-independent for analytic curves).
  bool contains(Point2 p) const;
};

FlowSet flow_set(const CurveSpec& c, const AnisoCube& Q, const GridSpec& ambient,
                 int refinement);

// Time set I_{x,E} = {t : x - gamma(t) in E} found by scanning
// t in [t0 - ell, t1 + ell] at step ell/1024; mu = sum log(hi/lo) over the
// merged intervals (exact Haar measure of the scanned intervals).
struct TimeSet {
  Point2 base;
  std::vector<std::pair<double, double>> intervals;
  double mu = 0.0;
};

TimeSet time_set(const CurveSpec& c, Point2 x, const FlowSet& E);

// PGM (P2) export of a raster mask for visual inspection.
std::string raster_to_pgm(const RasterMask& m);

// CSV rows: x, y, interval_lo, interval_hi, mu (mu repeated per row).
std::string time_set_to_csv(const TimeSet& ts);

}  // namespace curvelab
