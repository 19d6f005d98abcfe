#pragma once

#include <cstdint>

#include "curvelab/commutator.hpp"
#include "curvelab/cubes.hpp"
#include "curvelab/grid.hpp"

namespace curvelab {

// A positive weight stored with its logarithm, so negative powers
// (w^{-1/(p-1)}, w^{-1/2}) are formed from the log field without
// round-trip loss or overflow.
struct Weight {
  ScalarField2D log_w;

  ScalarField2D power(double s) const;          // w^s
  ScalarField2D field() const { return power(1.0); }
};

// w = e^{lambda b}. Rejects |lambda| * max|b| > 80 (exp overflow guard).
Weight exp_weight(const ScalarField2D& b, double lambda);

// Family-relative Muckenhoupt characteristic
//   [w]_{A_p} = sup_Q <w>_Q <w^{-1/(p-1)}>_Q^{p-1},  p > 1,
// with Q running over the family and <.>_Q the average over Q.
double ap_characteristic(const Weight& w, const CubeFamily& fam, double p);

// Family-relative reverse Holder characteristic
//   [w]_{RH_q} = sup_Q <w^q>_Q^{1/q} / <w>_Q.
double rh_characteristic(const Weight& w, const CubeFamily& fam, double q);

// ||T||_{L2(w) -> L2(w)} estimated by power iteration on the similarity
// transform f -> w^{1/2} T(w^{-1/2} f), which is unitarily equivalent to
// T on L2(w).
NormEstimate weighted_operator_norm(const OperatorHandle& T, const Weight& w,
                                    const GridSpec& spec, int max_iter = 200,
                                    double tol = 1e-8, std::uint64_t seed = 1);

}  // namespace curvelab
