#include "curvelab/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "curvelab/fft.hpp"
#include "curvelab/oscillation.hpp"

namespace curvelab {

namespace {

// Minimal periodic displacement of a - b on a circle of length l.
double wrap_diff(double a, double b, double l) {
  double d = std::fmod(a - b, l);
  if (d > 0.5 * l) d -= l;
  if (d < -0.5 * l) d += l;
  return d;
}

}  // namespace

ScalarField2D preset_smooth_random(const GridSpec& spec, std::uint64_t seed,
                                   int max_mode, double decay) {
  spec.validate();
  if (max_mode < 1 || max_mode >= std::min(spec.nx, spec.ny) / 2)
    throw std::invalid_argument("preset_smooth_random: max_mode out of range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  cvec hat(spec.size(), {0.0, 0.0});
  auto at = [&](int ki, int kj) -> std::complex<double>& {
    int i = (ki % spec.nx + spec.nx) % spec.nx;
    int j = (kj % spec.ny + spec.ny) % spec.ny;
    return hat[static_cast<std::size_t>(j) * spec.nx + i];
  };
  for (int kj = -max_mode; kj <= max_mode; ++kj) {
    for (int ki = -max_mode; ki <= max_mode; ++ki) {
      if (ki == 0 && kj == 0) continue;
      double amp = std::pow(1.0 + ki * ki + kj * kj, -0.5 * decay);
      // Draw in a fixed order; Hermitian symmetry fixes the conjugate mode.
      std::complex<double> c(gauss(rng), gauss(rng));
      if (kj < 0 || (kj == 0 && ki < 0)) continue;
      at(ki, kj) = amp * c;
      at(-ki, -kj) = amp * std::conj(c);
    }
  }
  cvec vals = fft2(hat, spec.nx, spec.ny, true);
  std::vector<double> out(vals.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = vals[k].real() * std::sqrt(static_cast<double>(spec.size()));
  return ScalarField2D(spec, std::move(out));
}

ScalarField2D preset_two_level(const GridSpec& spec, double scale_coarse,
                               double scale_fine) {
  auto sq = [](double x, double s) {
    return std::tanh(10.0 * std::sin(2.0 * std::numbers::pi * x / s));
  };
  return field_from_fn(spec, [&](double x, double y) {
    (void)y;
    return sq(x, scale_coarse) + sq(x, scale_fine);
  });
}

ScalarField2D preset_log_parabolic(const GridSpec& spec, Point2 center,
                                   double cap) {
  return field_from_fn(spec, [&](double x, double y) {
    double v1 = std::abs(wrap_diff(x, center.x, spec.lx));
    double v2 = std::abs(wrap_diff(y, center.y, spec.ly));
    double rho = std::max(v1, std::sqrt(v2));
    if (rho >= 1.0) return 0.0;
    return std::min(cap, std::log(1.0 / std::max(rho, 1e-300)));
  });
}

ScalarField2D preset_jump_plus_spike(const GridSpec& spec, double jump_x,
                                  double y0, double cap) {
  return field_from_fn(spec, [&](double x, double y) {
    double g = wrap_diff(x, jump_x, spec.lx) >= 0.0 ? 1.0 : -1.0;
    double r = std::abs(wrap_diff(y, y0, spec.ly));
    double psi = 0.0;
    if (r < 1.0) {
      double lg = std::log(1.0 / std::max(r, 1e-300));
      psi = std::min(cap, lg * lg);
    }
    return g + psi;
  });
}

ScalarField2D preset_sine_log_product(const GridSpec& spec, double y0, int m) {
  if (m < 0) throw std::invalid_argument("preset_sine_log_product: m >= 0");
  double lcap = m * std::numbers::ln2;  // log(1 / 2^{-m})
  return field_from_fn(spec, [&](double x, double y) {
    double g = std::sin(2.0 * std::numbers::pi * x / spec.lx);
    double r = std::abs(wrap_diff(y, y0, spec.ly));
    double lg = std::log(1.0 / std::max(r, 1e-300));
    double psi = std::log(1.0 + std::max(0.0, std::min(lg, lcap)));
    return g * psi;
  });
}

ScalarField2D normalize_family_bmo(const ScalarField2D& b,
                                   const CubeFamily& fam) {
  double v = bmo_norm(b, fam).value;
  if (!(v > 0.0))
    throw std::invalid_argument(
        "normalize_family_bmo: zero oscillation over the family");
  return scale(b, 1.0 / v);
}

}  // namespace curvelab
