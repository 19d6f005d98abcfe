#include "curvelab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace curvelab {

namespace {

// One cached plan per (nx, ny, sign), with a persistent aligned buffer.
// fftw_execute on a shared buffer is serialized by the cache mutex.
struct PlanEntry {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t n = 0;
};

std::mutex g_mutex;
std::map<std::tuple<int, int, int>, PlanEntry> g_plans;

PlanEntry& get_plan(int nx, int ny, int sign) {
  auto key = std::make_tuple(nx, ny, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  PlanEntry e;
  e.n = static_cast<std::size_t>(nx) * (ny > 0 ? ny : 1);
  e.buf = fftw_alloc_complex(e.n);
  if (ny > 0) {
    // FFTW's row-major convention: first dimension is the slow index (rows).
    e.plan = fftw_plan_dft_2d(ny, nx, e.buf, e.buf, sign, FFTW_ESTIMATE);
  } else {
    e.plan = fftw_plan_dft_1d(nx, e.buf, e.buf, sign, FFTW_ESTIMATE);
  }
  if (!e.plan) throw std::runtime_error("fft: plan creation failed");
  return g_plans.emplace(key, e).first->second;
}

cvec run(const cvec& in, int nx, int ny, bool inverse) {
  std::lock_guard<std::mutex> lock(g_mutex);
  int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  PlanEntry& e = get_plan(nx, ny, sign);
  if (in.size() != e.n) throw std::invalid_argument("fft: size mismatch");
  std::memcpy(e.buf, in.data(), e.n * sizeof(fftw_complex));
  fftw_execute(e.plan);
  cvec out(e.n);
  std::memcpy(out.data(), e.buf, e.n * sizeof(fftw_complex));
  if (inverse) {
    double norm = 1.0 / static_cast<double>(e.n);
    for (auto& z : out) z *= norm;
  }
  return out;
}

}  // namespace

cvec fft2(const cvec& in, int nx, int ny, bool inverse) {
  return run(in, nx, ny, inverse);
}

cvec fft1(const cvec& in, bool inverse) {
  return run(in, static_cast<int>(in.size()), 0, inverse);
}

}  // namespace curvelab
