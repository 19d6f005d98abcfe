#include "curvelab/commutator.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace curvelab {

OperatorHandle make_fourier_op(const MultiplierTable& m) {
  // The handle stores its own copy so it outlives the caller's table.
  auto tab = std::make_shared<MultiplierTable>(m);
  OperatorHandle op;
  op.label = "fourier:" + tab->curve_tag;
  op.apply = [tab](const ScalarField2D& f) {
    return curved_hilbert_fourier(f, *tab);
  };
  op.adjoint_apply = [tab](const ScalarField2D& f) {
    return curved_hilbert_fourier_adjoint(f, *tab);
  };
  return op;
}

OperatorHandle make_line_op() {
  OperatorHandle op;
  op.label = "line";
  op.apply = [](const ScalarField2D& f) { return line_hilbert(f); };
  op.adjoint_apply = [](const ScalarField2D& f) {
    return scale(line_hilbert(f), -1.0);
  };
  return op;
}

ScalarField2D commutator_apply(const ScalarField2D& b, const OperatorHandle& T,
                               const ScalarField2D& f) {
  return sub(mul(b, T.apply(f)), T.apply(mul(b, f)));
}

OperatorHandle make_commutator_op(const ScalarField2D& b,
                                  const OperatorHandle& T) {
  auto bf = std::make_shared<ScalarField2D>(b);
  auto inner = std::make_shared<OperatorHandle>(T);
  OperatorHandle op;
  op.label = "[b," + T.label + "]";
  op.apply = [bf, inner](const ScalarField2D& f) {
    return commutator_apply(*bf, *inner, f);
  };
  op.adjoint_apply = [bf, inner](const ScalarField2D& f) {
    // [b, T]* = -[b, T*] = T*(b f) - b T* f.
    return sub(inner->adjoint_apply(mul(*bf, f)),
               mul(*bf, inner->adjoint_apply(f)));
  };
  return op;
}

ScalarField2D higher_commutator_apply(const ScalarField2D& b,
                                      const OperatorHandle& T,
                                      const ScalarField2D& f, int k) {
  if (k < 1 || k > 4)
    throw std::invalid_argument("higher_commutator_apply: need 1 <= k <= 4");
  OperatorHandle op = T;
  for (int level = 0; level < k; ++level) op = make_commutator_op(b, op);
  return op.apply(f);
}

ComplexField2D conjugated_apply(const ScalarField2D& b, const OperatorHandle& T,
                                std::complex<double> z,
                                const ScalarField2D& f) {
  if (std::abs(z.real()) * b.max_abs() > 80.0)
    throw std::invalid_argument(
        "conjugated_apply: |Re z| * max|b| > 80 would overflow exp");
  const GridSpec& s = f.spec();
  if (!(s == b.spec()))
    throw std::invalid_argument("conjugated_apply: spec mismatch");

  // u = e^{-z b / 2} f, componentwise.
  ScalarField2D ure(s), uim(s);
  for (std::size_t k = 0; k < s.size(); ++k) {
    double bv = b.values()[k];
    double mag = std::exp(-0.5 * z.real() * bv);
    double ph = -0.5 * z.imag() * bv;
    ure.values()[k] = mag * std::cos(ph) * f.values()[k];
    uim.values()[k] = mag * std::sin(ph) * f.values()[k];
  }
  // T is real-linear and maps real fields to real fields, so it acts on
  // the real and imaginary parts independently.
  ScalarField2D vre = T.apply(ure);
  ScalarField2D vim = T.apply(uim);
  // w = e^{z b / 2} v.
  ComplexField2D out{ScalarField2D(s), ScalarField2D(s)};
  for (std::size_t k = 0; k < s.size(); ++k) {
    double bv = b.values()[k];
    double mag = std::exp(0.5 * z.real() * bv);
    double c = mag * std::cos(0.5 * z.imag() * bv);
    double si = mag * std::sin(0.5 * z.imag() * bv);
    out.re.values()[k] = c * vre.values()[k] - si * vim.values()[k];
    out.im.values()[k] = c * vim.values()[k] + si * vre.values()[k];
  }
  return out;
}

void ContourSpec::validate(double b_max_abs) const {
  if (!(radius > 0.0))
    throw std::invalid_argument("ContourSpec: radius must be positive");
  if (M < 4 || M % 2 != 0)
    throw std::invalid_argument("ContourSpec: M must be even and >= 4");
  if (radius * b_max_abs > 40.0)
    throw std::invalid_argument(
        "ContourSpec: radius * max|b| > 40 would overflow the conjugation");
}

ScalarField2D contour_commutator(const ScalarField2D& b,
                                 const OperatorHandle& T,
                                 const ScalarField2D& f, int k,
                                 const ContourSpec& contour) {
  if (k < 1 || k > 4)
    throw std::invalid_argument("contour_commutator: need 1 <= k <= 4");
  contour.validate(b.max_abs());
  const GridSpec& s = f.spec();
  ScalarField2D acc_re(s), acc_im(s);
  double term_scale = 0.0;
  for (int j = 0; j < contour.M; ++j) {
    double th = 2.0 * std::numbers::pi * j / contour.M;
    std::complex<double> z = std::polar(contour.radius, th);
    ComplexField2D g = conjugated_apply(b, T, z, f);
    // g(z_j) / z_j^k summed over the contour nodes.
    std::complex<double> zk = std::pow(z, -k);
    term_scale = std::max(
        term_scale, std::hypot(lp_norm(g.re, 2.0), lp_norm(g.im, 2.0)) *
                        std::abs(zk));
    for (std::size_t n = 0; n < s.size(); ++n) {
      std::complex<double> gv(g.re.values()[n], g.im.values()[n]);
      std::complex<double> term = gv * zk;
      acc_re.values()[n] += term.real();
      acc_im.values()[n] += term.imag();
    }
  }
  double fac = 1.0;
  for (int j = 2; j <= k; ++j) fac *= j;
  double coeff = std::pow(2.0, k) * fac / contour.M;
  ScalarField2D res = scale(acc_re, coeff);
  double resid = lp_norm(scale(acc_im, coeff), 2.0);
  double nrm = lp_norm(res, 2.0);
  // Near-zero results (e.g. constant b) are all rounding noise: the sum
  // cancels M terms of size term_scale, so allow a rounding-level floor
  // proportional to that cancellation mass.
  double noise_floor = 1e-10 * coeff * contour.M * term_scale;
  if (resid > std::max(1e-6 * nrm, noise_floor))
    throw std::runtime_error(
        "contour_commutator: imaginary residue exceeds 1e-6 of the result "
        "(contour under-resolved or symmetry broken)");
  return res;
}

NormEstimate operator_norm_upper(const OperatorHandle& T, const GridSpec& spec,
                                 int max_iter, double tol, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ScalarField2D v(spec);
  for (double& x : v.values()) x = gauss(rng);
  double nv = lp_norm(v, 2.0);
  v = scale(v, 1.0 / nv);

  NormEstimate est;
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    ScalarField2D w = T.adjoint_apply(T.apply(v));
    double lam = inner_product(v, w);  // Rayleigh quotient of T*T
    double nw = lp_norm(w, 2.0);
    est.iterations = it;
    est.residual = std::abs(lam - lambda) / std::max(std::abs(lam), 1e-300);
    lambda = lam;
    if (nw < 1e-300) break;  // v in the kernel: norm estimate is 0
    v = scale(w, 1.0 / nw);
    if (it > 1 && est.residual < tol) {
      est.converged = true;
      break;
    }
  }
  est.lower = std::sqrt(std::max(0.0, lambda));
  est.upper = est.lower;
  return est;
}

std::string TestingLowerBound::to_csv() const {
  std::ostringstream os;
  os << "corner_x,corner_y,ell,mu,deviation,rayleigh\n";
  os.precision(17);
  for (const auto& p : probes)
    os << p.cube.corner.x << "," << p.cube.corner.y << "," << p.cube.ell << ","
       << p.mu << "," << p.deviation << "," << p.rayleigh << "\n";
  return os.str();
}

TestingLowerBound operator_norm_lower_testing(const ScalarField2D& b,
                                              const OperatorHandle& T,
                                              const CubeFamily& fam,
                                              const CurveSpec& c,
                                              const TestingParams& p) {
  if (fam.cubes.empty())
    throw std::invalid_argument("operator_norm_lower_testing: empty family");
  const GridSpec& s = b.spec();
  OperatorHandle comm = make_commutator_op(b, T);
  TestingLowerBound out;
  for (const AnisoCube& Q : fam.cubes) {
    FlowSet E = flow_set(c, Q, s, p.refinement);
    TestingProbe probe;
    probe.cube = Q;
    probe.mu = time_set(c, Q.center(), E).mu;
    probe.deviation = testing_deviation(b, Q, c, p);
    // Indicator of E_Q sampled at grid nodes (analytic membership).
    ScalarField2D chi(s);
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i)
        if (E.contains(chi.node(i, j))) chi.at(i, j) = 1.0;
    double nchi = lp_norm(chi, 2.0);
    if (nchi > 0.0)
      probe.rayleigh = lp_norm(comm.apply(chi), 2.0) / nchi;
    out.probes.push_back(probe);
    if (probe.rayleigh > out.value) {
      out.value = probe.rayleigh;
      out.argmax = Q;
    }
  }
  return out;
}

std::vector<double> dense_matrix(const OperatorHandle& T,
                                 const GridSpec& spec) {
  spec.validate();
  std::size_t n = spec.size();
  if (n > 4096)
    throw std::invalid_argument("dense_matrix: grid too large to materialize");
  std::vector<double> mat(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    ScalarField2D e(spec);
    e.values()[k] = 1.0;
    ScalarField2D col = T.apply(e);
    for (std::size_t r = 0; r < n; ++r) mat[r * n + k] = col.values()[r];
  }
  return mat;
}

}  // namespace curvelab
