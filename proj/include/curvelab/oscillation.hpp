#pragma once

#include <string>
#include <vector>

#include "curvelab/cubes.hpp"
#include "curvelab/curves.hpp"
#include "curvelab/grid.hpp"
#include "curvelab/transforms.hpp"

namespace curvelab {

// Family-relative norm estimate: the discrete family only lower-bounds
// the continuum supremum.
struct OscillationReport {
  double value = 0.0;
  AnisoCube argmax;
  std::vector<std::pair<double, double>> per_scale;  // (scale ell, max)

  std::string to_csv(const CubeFamily& fam,
                     const std::vector<double>& per_cube) const;
};

// Mean oscillation sup over the family: max_Q (1/|Q|) int_Q |b - b_Q|.
// alpha = (1,1) cubes give planar BMO, (1,2) parabolic BMO.
OscillationReport bmo_norm(const ScalarField2D& b, const CubeFamily& fam);
// Same, also filling one oscillation value per family cube.
OscillationReport bmo_norm_detailed(const ScalarField2D& b,
                                    const CubeFamily& fam,
                                    std::vector<double>* per_cube);

// sup over rows y of the 1-D BMO estimate of b^y over a dyadic interval
// family with scales 2^{-m}, m in [m_min, m_max] (half-shift dithered).
double slice_bmo_inf(const ScalarField2D& b, int m_min, int m_max,
                     bool dithered = true);

struct TestingParams {
  int samples_x = 8;       // quadrature lattice inside each cube
  int samples_y = 4;
  QuadratureSpec quad;     // log-trapezoid reuse for the curve averages
  int refinement = 4;      // flow raster refinement
};

// The testing-BMO functional: per cube Q, the average over Q of
// |b(x) - Haar-average of b along the trajectory through x inside E_Q|.
OscillationReport testing_norm(const ScalarField2D& b, const CubeFamily& fam,
                               const CurveSpec& c, const TestingParams& p);

// Single-cube testing deviation (the inner average of testing_norm).
double testing_deviation(const ScalarField2D& b, const AnisoCube& Q,
                         const CurveSpec& c, const TestingParams& p);

// 1-D mean oscillation of one row over one interval (periodic, clipped).
double row_oscillation(const ScalarField2D& b, int row, double x_lo,
                       double x_hi);

}  // namespace curvelab
