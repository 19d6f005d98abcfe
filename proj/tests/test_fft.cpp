#include <stdexcept>
#include <cmath>
#include <complex>
#include <doctest.h>
#include <numbers>
#include <random>

#include "curvelab/fft.hpp"

using namespace curvelab;

TEST_CASE("fft1 of a delta is flat") {
  cvec in(16, {0.0, 0.0});
  in[0] = 1.0;
  cvec out = fft1(in, false);
  for (const auto& z : out) {
    CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("fft1 roundtrip and Parseval") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cvec in(64);
  for (auto& z : in) z = {u(rng), u(rng)};
  cvec back = fft1(fft1(in, false), true);
  double t_sq = 0.0, f_sq = 0.0;
  cvec hat = fft1(in, false);
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(std::abs(back[i] - in[i]) < 1e-12);
    t_sq += std::norm(in[i]);
    f_sq += std::norm(hat[i]);
  }
  CHECK(f_sq == doctest::Approx(t_sq * in.size()).epsilon(1e-12));
}

TEST_CASE("fft2 isolates a single plane wave") {
  int nx = 16, ny = 8;
  cvec in(static_cast<std::size_t>(nx) * ny);
  int kx = 3, ky = 2;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      in[static_cast<std::size_t>(j) * nx + i] =
          std::polar(1.0, 2.0 * std::numbers::pi *
                              (double(kx) * i / nx + double(ky) * j / ny));
  cvec hat = fft2(in, nx, ny, false);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double expect = (i == kx && j == ky) ? double(nx) * ny : 0.0;
      CHECK(std::abs(hat[static_cast<std::size_t>(j) * nx + i] - expect) <
            1e-9);
    }
}

TEST_CASE("fft2 roundtrip on a rectangular grid") {
  int nx = 32, ny = 8;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  cvec in(static_cast<std::size_t>(nx) * ny);
  for (auto& z : in) z = {u(rng), u(rng)};
  cvec back = fft2(fft2(in, nx, ny, false), nx, ny, true);
  for (std::size_t i = 0; i < in.size(); ++i)
    CHECK(std::abs(back[i] - in[i]) < 1e-12);
}
