#pragma once

#include <cstdint>

#include "curvelab/cubes.hpp"
#include "curvelab/grid.hpp"

namespace curvelab {

// Seeded band-limited random field: Fourier modes |k| <= max_mode with
// Gaussian coefficients damped by (1 + |k|^2)^{-decay/2}. Smooth,
// periodic, mean zero.
ScalarField2D preset_smooth_random(const GridSpec& spec, std::uint64_t seed,
                                   int max_mode = 8, double decay = 2.0);

// Two smoothed square waves in x at scales scale_coarse and scale_fine,
// summed; oscillation is present at well-separated scales.
ScalarField2D preset_two_level(const GridSpec& spec, double scale_coarse = 0.25,
                               double scale_fine = 1.0 / 32.0);

// b(x) = min(cap, log(1 / rho(x - center))) with the anisotropic
// quasi-norm rho(v) = max(|v_1|, |v_2|^{1/2}): the canonical unbounded
// member of the parabolic oscillation class.
ScalarField2D preset_log_parabolic(const GridSpec& spec, Point2 center,
                                   double cap = 12.0);

// b(x, y) = g(x) + psi(y): a sign jump at jump_x plus a capped
// (log|y - y0|)^2 spike. The sum keeps every horizontal slice's
// oscillation bounded (|g| = 1 caps it at 1) while the planar
// oscillation grows with scale.
ScalarField2D preset_jump_plus_spike(const GridSpec& spec, double jump_x,
                                  double y0, double cap = 40.0);

// b(x, y) = g(x) * psi_m(y) with smooth bounded g and the doubly
// logarithmic spike psi_m(y) = log(1 + min(log(1/|y - y0|), log(1/t_m)))
// truncated at scale t_m = 2^{-m}: slice oscillation grows in m while
// the planar one saturates.
ScalarField2D preset_sine_log_product(const GridSpec& spec, double y0, int m);

// b scaled so its family-relative mean oscillation equals 1. Throws if
// the oscillation vanishes.
ScalarField2D normalize_family_bmo(const ScalarField2D& b,
                                   const CubeFamily& fam);

}  // namespace curvelab
