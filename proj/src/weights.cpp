#include "curvelab/weights.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace curvelab {

ScalarField2D Weight::power(double s) const {
  return map(log_w, [s](double v) { return std::exp(s * v); });
}

Weight exp_weight(const ScalarField2D& b, double lambda) {
  if (std::abs(lambda) * b.max_abs() > 80.0)
    throw std::invalid_argument(
        "exp_weight: |lambda| * max|b| > 80 would overflow exp");
  return Weight{scale(b, lambda)};
}

double ap_characteristic(const Weight& w, const CubeFamily& fam, double p) {
  if (!(p > 1.0))
    throw std::invalid_argument("ap_characteristic: need p > 1");
  if (fam.cubes.empty())
    throw std::invalid_argument("ap_characteristic: empty family");
  ScalarField2D wf = w.field();
  ScalarField2D wd = w.power(-1.0 / (p - 1.0));
  double best = 0.0;
  for (const AnisoCube& Q : fam.cubes) {
    Rect r = Q.rect();
    double a = average_over_rect(wf, r);
    double d = average_over_rect(wd, r);
    best = std::max(best, a * std::pow(d, p - 1.0));
  }
  return best;
}

double rh_characteristic(const Weight& w, const CubeFamily& fam, double q) {
  if (!(q > 1.0))
    throw std::invalid_argument("rh_characteristic: need q > 1");
  if (fam.cubes.empty())
    throw std::invalid_argument("rh_characteristic: empty family");
  ScalarField2D wf = w.field();
  ScalarField2D wq = w.power(q);
  double best = 0.0;
  for (const AnisoCube& Q : fam.cubes) {
    Rect r = Q.rect();
    double a = average_over_rect(wf, r);
    double aq = average_over_rect(wq, r);
    if (a > 0.0) best = std::max(best, std::pow(aq, 1.0 / q) / a);
  }
  return best;
}

NormEstimate weighted_operator_norm(const OperatorHandle& T, const Weight& w,
                                    const GridSpec& spec, int max_iter,
                                    double tol, std::uint64_t seed) {
  auto half = std::make_shared<ScalarField2D>(w.power(0.5));
  auto ihalf = std::make_shared<ScalarField2D>(w.power(-0.5));
  auto inner = std::make_shared<OperatorHandle>(T);
  OperatorHandle sim;
  sim.label = "w^{1/2} " + T.label + " w^{-1/2}";
  sim.apply = [half, ihalf, inner](const ScalarField2D& f) {
    return mul(*half, inner->apply(mul(*ihalf, f)));
  };
  // (A T B)* = B* T* A* with A, B real multiplication operators.
  sim.adjoint_apply = [half, ihalf, inner](const ScalarField2D& f) {
    return mul(*ihalf, inner->adjoint_apply(mul(*half, f)));
  };
  return operator_norm_upper(sim, spec, max_iter, tol, seed);
}

}  // namespace curvelab
