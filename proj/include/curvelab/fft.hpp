#pragma once

#include <complex>
#include <vector>

namespace curvelab {

using cvec = std::vector<std::complex<double>>;

// In-place style complex DFTs backed by FFTW (plans cached per shape).
// Forward uses e^{-i x xi} phases; inverse is normalized by 1/N.
cvec fft2(const cvec& in, int nx, int ny, bool inverse);
cvec fft1(const cvec& in, bool inverse);

}  // namespace curvelab
