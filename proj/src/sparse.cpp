#include "curvelab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace curvelab {

double sparse_form(const ScalarField2D& f, const ScalarField2D& g,
                   const SparseCollection& coll, double r, double s) {
  if (!(r >= 1.0) || !(s >= 1.0))
    throw std::invalid_argument("sparse_form: need r, s >= 1");
  if (!(f.spec() == g.spec()) || !(f.spec() == coll.ambient))
    throw std::invalid_argument("sparse_form: spec mismatch");
  ScalarField2D fr = map(f, [r](double v) { return std::pow(std::abs(v), r); });
  ScalarField2D gs = map(g, [s](double v) { return std::pow(std::abs(v), s); });
  double total = 0.0;
  for (const AnisoCube& P : coll.cubes) {
    Rect rect = P.rect();
    double af = std::pow(average_over_rect(fr, rect), 1.0 / r);
    double ag = std::pow(average_over_rect(gs, rect), 1.0 / s);
    total += af * ag * P.measure();
  }
  return total;
}

SparseCollection generate_sparse_family(const GridSpec& ambient,
                                        const Rect& window, int m_min,
                                        int m_max,
                                        std::array<double, 2> alpha,
                                        double delta) {
  ambient.validate();
  if (!(delta > 0.0) || !(delta <= 1.0))
    throw std::invalid_argument("generate_sparse_family: need 0 < delta <= 1");
  if (!ambient.domain().contains(window))
    throw std::invalid_argument(
        "generate_sparse_family: window exceeds the ambient domain");
  CubeFamily fam = enumerate_family(window, m_min, m_max, alpha, false);

  SparseCollection coll;
  coll.ambient = ambient;
  coll.delta = delta;
  double cdx = ambient.dx(), cdy = ambient.dy();
  double cell_area = cdx * cdy;
  std::vector<std::uint8_t> taken(ambient.size(), 0);

  // Coarse scales first: a parent claims before its descendants. Each
  // scale prefers its own residue class of (i + j) mod 4, a 25%-density
  // sub-lattice of every cube, so up to four nested generations at
  // delta <= 1/4 never compete for cells; denser requests spill into the
  // other classes in a fixed rotation.
  std::vector<std::size_t> order(fam.cubes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&fam](std::size_t a, std::size_t b) {
                     return fam.cubes[a].ell > fam.cubes[b].ell;
                   });

  for (std::size_t k : order) {
    const AnisoCube& P = fam.cubes[k];
    int home_class = fam.scale_index[k] % 4;
    Rect r = P.rect();
    int i0 = static_cast<int>(std::ceil((r.x0 - ambient.origin.x) / cdx - 0.5));
    int i1 = static_cast<int>(std::floor((r.x1 - ambient.origin.x) / cdx - 0.5));
    int j0 = static_cast<int>(std::ceil((r.y0 - ambient.origin.y) / cdy - 0.5));
    int j1 = static_cast<int>(std::floor((r.y1 - ambient.origin.y) / cdy - 0.5));
    auto inside = [&](int i, int j) {
      Point2 c{ambient.origin.x + (i + 0.5) * cdx,
               ambient.origin.y + (j + 0.5) * cdy};
      return r.contains(c);
    };
    std::size_t need = static_cast<std::size_t>(
        std::ceil(delta * P.measure() / cell_area - 1e-9));
    std::vector<std::uint32_t> claimed;
    for (int off = 0; off < 4 && claimed.size() < need; ++off) {
      int cls = (home_class + off) % 4;
      for (int j = std::max(0, j0); j <= std::min(ambient.ny - 1, j1); ++j) {
        for (int i = std::max(0, i0); i <= std::min(ambient.nx - 1, i1); ++i) {
          if ((i + j) % 4 != cls || !inside(i, j)) continue;
          std::uint32_t idx = static_cast<std::uint32_t>(j) * ambient.nx + i;
          if (taken[idx]) continue;
          taken[idx] = 1;
          claimed.push_back(idx);
          if (claimed.size() >= need) break;
        }
        if (claimed.size() >= need) break;
      }
    }
    if (claimed.size() < need)
      throw std::runtime_error(
          "generate_sparse_family: a cube cannot claim delta of its cells; "
          "lower delta or refine the ambient grid");
    coll.cubes.push_back(P);
    coll.claimed.push_back(std::move(claimed));
  }
  return coll;
}

double domination_ratio(double pairing, double form_value) {
  double p = std::abs(pairing);
  if (form_value <= 0.0) {
    if (p <= 1e-14) return 0.0;
    throw std::invalid_argument(
        "domination_ratio: sparse form vanishes but the pairing does not");
  }
  return p / form_value;
}

}  // namespace curvelab
