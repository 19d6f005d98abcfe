#include "curvelab/cubes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "curvelab/curves.hpp"

namespace curvelab {

CubeFamily enumerate_family(const Rect& window, int m_min, int m_max,
                            std::array<double, 2> alpha, bool dithered) {
  if (m_min > m_max)
    throw std::invalid_argument("enumerate_family: m_min > m_max");
  if (!(window.area() > 0.0))
    throw std::invalid_argument("enumerate_family: empty window");

  CubeFamily fam;
  fam.window = window;
  fam.alpha = alpha;
  const double tol = 1e-9;
  for (int m = m_min; m <= m_max; ++m) {
    double ell = std::pow(2.0, -m);
    fam.scales.push_back(ell);
    double sx = std::pow(ell, alpha[0]);
    double sy = std::pow(ell, alpha[1]);
    std::vector<Point2> shifts = {{0.0, 0.0}};
    if (dithered) {
      shifts.push_back({0.5 * sx, 0.0});
      shifts.push_back({0.0, 0.5 * sy});
      shifts.push_back({0.5 * sx, 0.5 * sy});
    }
    int scale_idx = static_cast<int>(fam.scales.size()) - 1;
    for (const Point2& sh : shifts) {
      int ni = static_cast<int>(std::floor((window.width() - sh.x) / sx + tol));
      int nj = static_cast<int>(std::floor((window.height() - sh.y) / sy + tol));
      for (int j = 0; j < nj; ++j) {
        for (int i = 0; i < ni; ++i) {
          AnisoCube q;
          q.corner = {window.x0 + sh.x + i * sx, window.y0 + sh.y + j * sy};
          q.ell = ell;
          q.alpha = alpha;
          fam.cubes.push_back(q);
          fam.scale_index.push_back(scale_idx);
        }
      }
    }
  }
  if (fam.cubes.empty())
    throw std::invalid_argument(
        "enumerate_family: window smaller than the coarsest cube");
  return fam;
}

CubeFamily subsample_family(const CubeFamily& fam, int max_per_scale) {
  if (max_per_scale <= 0)
    throw std::invalid_argument("subsample_family: max_per_scale must be > 0");
  CubeFamily out;
  out.window = fam.window;
  out.alpha = fam.alpha;
  out.scales = fam.scales;
  for (std::size_t s = 0; s < fam.scales.size(); ++s) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < fam.cubes.size(); ++k)
      if (fam.scale_index[k] == static_cast<int>(s)) idx.push_back(k);
    std::size_t stride =
        std::max<std::size_t>(1, (idx.size() + max_per_scale - 1) / max_per_scale);
    for (std::size_t k = 0; k < idx.size(); k += stride) {
      out.cubes.push_back(fam.cubes[idx[k]]);
      out.scale_index.push_back(static_cast<int>(s));
    }
  }
  return out;
}

SparsityReport verify_sparsity(const SparseCollection& s) {
  SparsityReport rep;
  rep.disjoint = true;
  rep.worst_ratio = 1e300;
  std::unordered_set<std::uint32_t> seen;
  double cell_area = s.ambient.dx() * s.ambient.dy();
  for (std::size_t k = 0; k < s.cubes.size(); ++k) {
    for (std::uint32_t c : s.claimed[k]) {
      if (!seen.insert(c).second) {
        rep.disjoint = false;
        rep.violating_cube = static_cast<int>(k);
      }
    }
    double ratio =
        s.claimed[k].size() * cell_area / s.cubes[k].measure();
    if (ratio < rep.worst_ratio) {
      rep.worst_ratio = ratio;
      if (ratio < s.delta - 1e-12) rep.violating_cube = static_cast<int>(k);
    }
  }
  if (s.cubes.empty()) rep.worst_ratio = 0.0;
  rep.ok = rep.disjoint && rep.worst_ratio >= s.delta - 1e-12;
  return rep;
}

namespace {

// Distance from rectangle r (assumed inside R) to R's boundary.
double interior_margin(const Rect& r, const Rect& R) {
  return std::min(std::min(r.x0 - R.x0, R.x1 - r.x1),
                  std::min(r.y0 - R.y0, R.y1 - r.y1));
}

// Bounding box of the flow set of Q, analytic curves only.
Rect flow_bbox(const CurveSpec& c, const AnisoCube& Q) {
  double t0 = 9.0 * Q.ell, t1 = 10.0 * Q.ell;
  Point2 a = eval_curve(c, t0), b = eval_curve(c, t1);
  Rect qr = Q.rect();
  return Rect{qr.x0 - std::max(a.x, b.x), qr.y0 - std::max(a.y, b.y),
              qr.x1 - std::min(a.x, b.x), qr.y1 - std::min(a.y, b.y)};
}

}  // namespace

std::optional<AnisoCube> find_testing_subcube(const AnisoCube& Q,
                                              const AnisoCube& R,
                                              const CurveSpec& curve,
                                              const GridSpec& ambient,
                                              int refinement, int max_depth) {
  Q.validate();
  R.validate();
  Rect rr = R.rect();
  for (int d = 1; d <= max_depth; ++d) {
    double ell = Q.ell / std::pow(2.0, d);
    double sx = std::pow(ell, Q.alpha[0]);
    double sy = std::pow(ell, Q.alpha[1]);
    double nix = Q.side(0) / sx, niy = Q.side(1) / sy;
    int ni = static_cast<int>(std::lround(nix));
    int nj = static_cast<int>(std::lround(niy));
    // Sub-cubes only tile exactly for integer exponents.
    if (std::abs(nix - ni) > 1e-9 || std::abs(niy - nj) > 1e-9) continue;

    std::optional<AnisoCube> best;
    double best_margin = -1.0;
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < ni; ++i) {
        AnisoCube sub;
        sub.corner = {Q.corner.x + i * sx, Q.corner.y + j * sy};
        sub.ell = ell;
        sub.alpha = Q.alpha;
        Rect bb = flow_bbox(curve, sub);
        if (!rr.contains(bb)) continue;
        double margin = interior_margin(bb, rr);
        if (margin > best_margin) {
          best_margin = margin;
          best = sub;
        }
      }
    }
    if (best) {
      // Re-verify on the raster before returning.
      try {
        FlowSet E = flow_set(curve, *best, ambient, refinement);
        const RasterMask& m = E.raster;
        bool inside = true;
        for (int j = 0; j < m.nyc && inside; ++j)
          for (int i = 0; i < m.nxc; ++i)
            if (m.cell(i, j) &&
                !rr.contains(Point2{m.x0 + (i + 0.5) * m.cx,
                                    m.y0 + (j + 0.5) * m.cy})) {
              inside = false;
              break;
            }
        if (inside) return best;
      } catch (const std::invalid_argument&) {
        // Flow exits the ambient domain; keep descending.
      }
    }
  }
  return std::nullopt;
}

std::string family_to_csv(const CubeFamily& fam) {
  std::ostringstream os;
  os << "corner_x,corner_y,ell,scale_index\n";
  os.precision(17);
  for (std::size_t k = 0; k < fam.cubes.size(); ++k)
    os << fam.cubes[k].corner.x << "," << fam.cubes[k].corner.y << ","
       << fam.cubes[k].ell << "," << fam.scale_index[k] << "\n";
  return os.str();
}

}  // namespace curvelab
