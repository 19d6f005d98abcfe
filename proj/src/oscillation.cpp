#include "curvelab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace curvelab {

std::string OscillationReport::to_csv(const CubeFamily& fam,
                                      const std::vector<double>& per_cube) const {
  std::ostringstream os;
  os << "scale,corner_x,corner_y,ell,oscillation\n";
  os.precision(17);
  for (std::size_t k = 0; k < fam.cubes.size() && k < per_cube.size(); ++k)
    os << fam.scale_index[k] << "," << fam.cubes[k].corner.x << ","
       << fam.cubes[k].corner.y << "," << fam.cubes[k].ell << "," << per_cube[k]
       << "\n";
  return os.str();
}

OscillationReport bmo_norm_detailed(const ScalarField2D& b,
                                    const CubeFamily& fam,
                                    std::vector<double>* per_cube) {
  if (fam.cubes.empty())
    throw std::invalid_argument("bmo_norm: empty cube family");
  OscillationReport rep;
  rep.per_scale.reserve(fam.scales.size());
  for (double s : fam.scales) rep.per_scale.emplace_back(s, 0.0);
  if (per_cube) per_cube->assign(fam.cubes.size(), 0.0);
  for (std::size_t k = 0; k < fam.cubes.size(); ++k) {
    Rect r = fam.cubes[k].rect();
    double mean = average_over_rect(b, r);
    double osc = average_abs_dev_over_rect(b, r, mean);
    if (per_cube) (*per_cube)[k] = osc;
    auto& [scale, mx] = rep.per_scale[fam.scale_index[k]];
    (void)scale;
    mx = std::max(mx, osc);
    if (osc > rep.value) {
      rep.value = osc;
      rep.argmax = fam.cubes[k];
    }
  }
  return rep;
}

OscillationReport bmo_norm(const ScalarField2D& b, const CubeFamily& fam) {
  return bmo_norm_detailed(b, fam, nullptr);
}

double row_oscillation(const ScalarField2D& b, int row, double x_lo,
                       double x_hi) {
  const GridSpec& s = b.spec();
  if (!(x_hi > x_lo)) throw std::invalid_argument("row_oscillation: empty interval");
  double d = s.dx();
  long i0 = static_cast<long>(std::floor((x_lo - s.origin.x) / d + 0.5));
  long i1 = static_cast<long>(std::floor((x_hi - s.origin.x) / d + 0.5));
  auto wrap = [&](long i) {
    long r = i % s.nx;
    return static_cast<int>(r < 0 ? r + s.nx : r);
  };
  double len = x_hi - x_lo;
  double mean = 0.0;
  for (long i = i0; i <= i1; ++i) {
    double lo = s.origin.x + (i - 0.5) * d;
    double w = std::max(0.0, std::min(lo + d, x_hi) - std::max(lo, x_lo));
    mean += w * b.at(wrap(i), row);
  }
  mean /= len;
  double dev = 0.0;
  for (long i = i0; i <= i1; ++i) {
    double lo = s.origin.x + (i - 0.5) * d;
    double w = std::max(0.0, std::min(lo + d, x_hi) - std::max(lo, x_lo));
    dev += w * std::abs(b.at(wrap(i), row) - mean);
  }
  return dev / len;
}

double slice_bmo_inf(const ScalarField2D& b, int m_min, int m_max,
                     bool dithered) {
  if (m_min > m_max) throw std::invalid_argument("slice_bmo_inf: m_min > m_max");
  const GridSpec& s = b.spec();
  double best = 0.0;
  for (int m = m_min; m <= m_max; ++m) {
    double len = std::pow(2.0, -m);
    if (len > s.lx + 1e-12) continue;
    int count = static_cast<int>(std::floor(s.lx / len + 1e-9));
    std::vector<double> shifts = {0.0};
    if (dithered) shifts.push_back(0.5 * len);
    for (int row = 0; row < s.ny; ++row) {
      for (double sh : shifts) {
        for (int i = 0; i < count; ++i) {
          double lo = s.origin.x + sh + i * len;
          if (sh + (i + 1) * len > s.lx + 1e-12) continue;
          best = std::max(best, row_oscillation(b, row, lo, lo + len));
        }
      }
    }
  }
  return best;
}

namespace {

// Haar-weighted average of b along the trajectory through x over the
// time set: (1/mu) integral_I b(x - gamma(t)) dt/t, log-trapezoid per
// interval.
double curve_average(const ScalarField2D& b, const CurveSpec& c, Point2 x,
                     const TimeSet& ts, int nodes_per_dyad) {
  double acc = 0.0, mu = 0.0;
  for (const auto& [a, bb] : ts.intervals) {
    if (!(bb > a)) continue;
    double u0 = std::log(a), u1 = std::log(bb);
    int n = std::max(8, static_cast<int>(std::ceil(
                            nodes_per_dyad * (u1 - u0) / std::numbers::ln2)));
    double du = (u1 - u0) / n;
    for (int k = 0; k <= n; ++k) {
      double t = std::exp(u0 + k * du);
      double w = (k == 0 || k == n) ? 0.5 * du : du;
      Point2 g = eval_curve(c, t);
      acc += w * sample_at(b, {x.x - g.x, x.y - g.y});
    }
    mu += u1 - u0;
  }
  if (!(mu > 0.0))
    throw std::runtime_error(
        "testing_norm: empty time set inside a flow cube (geometry bug)");
  return acc / mu;
}

}  // namespace

double testing_deviation(const ScalarField2D& b, const AnisoCube& Q,
                         const CurveSpec& c, const TestingParams& p) {
  FlowSet E = flow_set(c, Q, b.spec(), p.refinement);
  double sx = Q.side(0), sy = Q.side(1);
  double total = 0.0;
  for (int j = 0; j < p.samples_y; ++j) {
    for (int i = 0; i < p.samples_x; ++i) {
      Point2 x{Q.corner.x + (i + 0.5) * sx / p.samples_x,
               Q.corner.y + (j + 0.5) * sy / p.samples_y};
      TimeSet ts = time_set(c, x, E);
      double avg = curve_average(b, c, x, ts, p.quad.nodes_per_dyad);
      total += std::abs(sample_at(b, x) - avg);
    }
  }
  return total / (p.samples_x * p.samples_y);
}

OscillationReport testing_norm(const ScalarField2D& b, const CubeFamily& fam,
                               const CurveSpec& c, const TestingParams& p) {
  if (fam.cubes.empty())
    throw std::invalid_argument("testing_norm: empty cube family");
  OscillationReport rep;
  for (double s : fam.scales) rep.per_scale.emplace_back(s, 0.0);
  for (std::size_t k = 0; k < fam.cubes.size(); ++k) {
    double dev = testing_deviation(b, fam.cubes[k], c, p);
    auto& mx = rep.per_scale[fam.scale_index[k]].second;
    mx = std::max(mx, dev);
    if (dev > rep.value) {
      rep.value = dev;
      rep.argmax = fam.cubes[k];
    }
  }
  return rep;
}

}  // namespace curvelab
