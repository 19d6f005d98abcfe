#pragma once

#include "curvelab/cubes.hpp"
#include "curvelab/grid.hpp"

namespace curvelab {

// Sparse bilinear form over the collection's cubes:
//   Lambda_{r,s}(f, g) = sum_P <|f|^r>_P^{1/r} <|g|^s>_P^{1/s} |P|
// with <.>_P the average over P. Requires r, s >= 1.
double sparse_form(const ScalarField2D& f, const ScalarField2D& g,
                   const SparseCollection& coll, double r, double s);

// Builds a delta-sparse collection from the dyadic tiling of window at
// scales 2^{-m}, m in [m_min, m_max]: each cube greedily claims
// unclaimed ambient-grid cells inside itself, coarse scales first. Each
// scale prefers its own diagonal residue class (i + j) mod 4, so up to
// four nested scales at delta <= 1/4 never compete for cells. Throws if
// some cube cannot reach delta|P|.
SparseCollection generate_sparse_family(const GridSpec& ambient,
                                        const Rect& window, int m_min,
                                        int m_max,
                                        std::array<double, 2> alpha,
                                        double delta);

// |<T f, g>| / Lambda_{r,s}(f, g): the constant the sparse form needs to
// dominate the pairing. Returns 0 when the form vanishes and the pairing
// does too; throws if the form vanishes while the pairing does not.
double domination_ratio(double pairing, double form_value);

}  // namespace curvelab
