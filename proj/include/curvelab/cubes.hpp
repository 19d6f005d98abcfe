#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "curvelab/grid.hpp"

namespace curvelab {

struct CurveSpec;  // curves.hpp

// Anisotropic cube: product of intervals with |I_k| = ell^{alpha_k}.
// alpha = (1, 2) gives parabolic cubes I x J with |J| = |I|^2; alpha = (1, 1)
// gives ordinary squares.
struct AnisoCube {
  Point2 corner{0.0, 0.0};
  double ell = 0.0;
  std::array<double, 2> alpha{1.0, 2.0};

  double side(int k) const;
  double measure() const { return side(0) * side(1); }
  Rect rect() const {
    return Rect{corner.x, corner.y, corner.x + side(0), corner.y + side(1)};
  }
  Point2 center() const {
    return {corner.x + 0.5 * side(0), corner.y + 0.5 * side(1)};
  }
  void validate() const;
};

// Dyadic anisotropic tiling of a window at scales ell = 2^{-m},
// m in [m_min, m_max]. Approximates the suprema over all cubes; reported
// norms are family-relative.
struct CubeFamily {
  Rect window;
  std::array<double, 2> alpha{1.0, 2.0};
  std::vector<double> scales;
  std::vector<AnisoCube> cubes;
  std::vector<int> scale_index;  // per cube, index into scales
};

// Grid-aligned tiling per scale; boundary-clipped cubes are dropped.
// The dithered variant adds three half-side-shifted grids per scale to
// narrow the gap against the continuum supremum.
CubeFamily enumerate_family(const Rect& window, int m_min, int m_max,
                            std::array<double, 2> alpha, bool dithered = false);

// Keeps at most max_per_scale cubes per scale (even stride); the rest of
// the family metadata is preserved. Used to cap experiment cost.
CubeFamily subsample_family(const CubeFamily& fam, int max_per_scale);

// delta-sparse collection: cube P paired with a claimed cell set E_P
// (ambient-grid linear cell indices), pairwise disjoint, |E_P| >= delta|P|.
struct SparseCollection {
  GridSpec ambient;
  double delta = 0.0;
  std::vector<AnisoCube> cubes;
  std::vector<std::vector<std::uint32_t>> claimed;  // per cube, cell indices
};

struct SparsityReport {
  bool ok = false;
  bool disjoint = false;
  double worst_ratio = 0.0;
  int violating_cube = -1;
};

SparsityReport verify_sparsity(const SparseCollection& s);

// Searches dyadic sub-cubes of Q (at most max_depth levels down) for a
// cube whose flow set lies entirely inside R; returns the largest hit,
// breaking size ties toward the deepest interior placement.
std::optional<AnisoCube> find_testing_subcube(const AnisoCube& Q,
                                              const AnisoCube& R,
                                              const CurveSpec& curve,
                                              const GridSpec& ambient,
                                              int refinement = 8,
                                              int max_depth = 6);

// CSV rows: corner_x, corner_y, ell, scale_index.
std::string family_to_csv(const CubeFamily& fam);

}  // namespace curvelab
