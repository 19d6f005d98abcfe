#include "curvelab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace curvelab {

namespace {

constexpr double kTorsionTol = 1e-8;

struct Interval {
  double lo = 1.0, hi = 0.0;  // empty by default
  bool empty() const { return !(lo <= hi); }
};

Interval intersect(Interval a, Interval b) {
  return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

double root(double v, double alpha) {
  if (alpha == 1.0) return v;
  if (alpha == 2.0) return std::sqrt(v);
  if (alpha == 3.0) return std::cbrt(v);
  return std::pow(v, 1.0 / alpha);
}

// Admissible positive times t with c <= p + eps*t^alpha <= c + s.
Interval coord_interval(double p, double c, double s, int eps, double alpha) {
  double lo, hi;
  if (eps > 0) {
    lo = c - p;
    hi = c + s - p;
  } else {
    lo = p - c - s;
    hi = p - c;
  }
  if (hi < 0.0) return Interval{};
  lo = std::max(lo, 0.0);
  double tlo = root(lo, alpha), thi = root(hi, alpha);
  // The flow set is closed; at a boundary point the witness time can
  // degenerate to a single value and rounding of t^alpha must not flip
  // membership. Widen by a few ulps of the window endpoints.
  double tol = 4e-15 * std::max(std::abs(tlo), std::abs(thi));
  return Interval{tlo - tol, thi + tol};
}

}  // namespace

double AnisoCube::side(int k) const { return std::pow(ell, alpha[k]); }

void AnisoCube::validate() const {
  if (!(ell > 0.0)) throw std::invalid_argument("AnisoCube: ell must be > 0");
  if (!(alpha[0] > 0.0) || !(alpha[1] > 0.0))
    throw std::invalid_argument("AnisoCube: exponents must be positive");
}

CurveSpec CurveSpec::parabola() {
  CurveSpec c;
  c.kind = CurveKind::Parabola;
  c.alpha = {1.0, 2.0};
  c.eps = {1, 1};
  c.eps_neg = {-1, 1};  // gamma(-t) = (-t, t^2), i.e. gamma(t) = (t, t^2) everywhere
  return c;
}

CurveSpec CurveSpec::line() {
  CurveSpec c;
  c.kind = CurveKind::Line;
  c.alpha = {1.0, 1.0};
  c.eps = {1, 1};
  c.eps_neg = {-1, -1};
  return c;
}

CurveSpec CurveSpec::monomial(std::array<double, 2> alpha,
                              std::array<int, 2> eps,
                              std::array<int, 2> eps_neg) {
  for (int k = 0; k < 2; ++k) {
    if (!(alpha[k] > 0.0))
      throw std::invalid_argument("monomial curve: exponents must be positive");
    if (std::abs(eps[k]) != 1 || std::abs(eps_neg[k]) != 1)
      throw std::invalid_argument("monomial curve: signs must be +-1");
  }
  if (eps[0] == eps_neg[0] && eps[1] == eps_neg[1])
    throw std::invalid_argument(
        "monomial curve: needs an index j with eps_j != eps'_j");
  CurveSpec c;
  c.kind = CurveKind::Monomial;
  c.alpha = alpha;
  c.eps = eps;
  c.eps_neg = eps_neg;
  return c;
}

CurveSpec CurveSpec::torsion(std::vector<double> nodes,
                             std::vector<Point2> samples,
                             std::vector<Point2> deriv1,
                             std::vector<Point2> deriv2) {
  if (nodes.size() < 2 || samples.size() != nodes.size() ||
      deriv1.size() != nodes.size() || deriv2.size() != nodes.size())
    throw std::invalid_argument("torsion curve: inconsistent sample tables");
  if (nodes.front() < -1.0 - 1e-12 || nodes.back() > 1.0 + 1e-12)
    throw std::invalid_argument("torsion curve: nodes must lie in [-1, 1]");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("torsion curve: nodes must increase");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double det = deriv1[i].x * deriv2[i].y - deriv1[i].y * deriv2[i].x;
    if (std::abs(det) < kTorsionTol)
      throw std::invalid_argument(
          "torsion curve: det(nu', nu'') vanishes at node " +
          std::to_string(nodes[i]));
  }
  CurveSpec c;
  c.kind = CurveKind::Torsion;
  c.nodes = std::move(nodes);
  c.samples = std::move(samples);
  c.deriv1 = std::move(deriv1);
  c.deriv2 = std::move(deriv2);
  return c;
}

bool CurveSpec::is_odd() const {
  if (kind == CurveKind::Torsion) return false;
  if (kind == CurveKind::Line) return true;
  return eps[0] == -eps_neg[0] && eps[1] == -eps_neg[1];
}

std::string CurveSpec::tag() const {
  std::ostringstream os;
  switch (kind) {
    case CurveKind::Parabola:
      os << "parabola";
      break;
    case CurveKind::Line:
      os << "line";
      break;
    case CurveKind::Monomial:
      os << "monomial_a" << alpha[0] << "_" << alpha[1] << "_e" << eps[0]
         << eps[1] << "_ep" << eps_neg[0] << eps_neg[1];
      break;
    case CurveKind::Torsion:
      os << "torsion_n" << nodes.size();
      break;
  }
  return os.str();
}

Point2 eval_curve(const CurveSpec& c, double t) {
  switch (c.kind) {
    case CurveKind::Line:
      return {t, 0.0};
    case CurveKind::Parabola:
    case CurveKind::Monomial: {
      const auto& e = (t >= 0.0) ? c.eps : c.eps_neg;
      double a = std::abs(t);
      return {e[0] * std::pow(a, c.alpha[0]), e[1] * std::pow(a, c.alpha[1])};
    }
    case CurveKind::Torsion: {
      if (t < c.nodes.front() - 1e-12 || t > c.nodes.back() + 1e-12)
        throw std::invalid_argument("torsion curve: t outside [-1, 1]");
      t = std::clamp(t, c.nodes.front(), c.nodes.back());
      auto it = std::upper_bound(c.nodes.begin(), c.nodes.end(), t);
      std::size_t i =
          std::min(c.nodes.size() - 2,
                   static_cast<std::size_t>(
                       std::max<std::ptrdiff_t>(0, it - c.nodes.begin() - 1)));
      double h = c.nodes[i + 1] - c.nodes[i];
      double u = (t - c.nodes[i]) / h;
      // Cubic Hermite on [nodes[i], nodes[i+1]].
      double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
      double h10 = u * (1 - u) * (1 - u);
      double h01 = u * u * (3 - 2 * u);
      double h11 = u * u * (u - 1);
      auto blend = [&](double p0, double m0, double p1, double m1) {
        return h00 * p0 + h10 * h * m0 + h01 * p1 + h11 * h * m1;
      };
      return {blend(c.samples[i].x, c.deriv1[i].x, c.samples[i + 1].x,
                    c.deriv1[i + 1].x),
              blend(c.samples[i].y, c.deriv1[i].y, c.samples[i + 1].y,
                    c.deriv1[i + 1].y)};
    }
  }
  throw std::logic_error("eval_curve: unknown curve kind");
}

std::size_t RasterMask::count() const {
  std::size_t n = 0;
  for (auto v : cells) n += v != 0;
  return n;
}

bool RasterMask::contains_point(Point2 p) const {
  int i = static_cast<int>(std::floor((p.x - x0) / cx));
  int j = static_cast<int>(std::floor((p.y - y0) / cy));
  if (i < 0 || j < 0 || i >= nxc || j >= nyc) return false;
  return cell(i, j);
}

namespace {

bool curve_is_analytic(const CurveSpec& c) {
  return c.kind != CurveKind::Torsion;
}

// Exact membership for monotone analytic curves over a positive time
// window: p in E_Q iff some t in [t0, t1] puts p + gamma(t) back in Q.
bool analytic_contains(const CurveSpec& c, const AnisoCube& Q, double t0,
                       double t1, Point2 p) {
  Interval t{t0, t1};
  t = intersect(t, coord_interval(p.x, Q.corner.x, Q.side(0), c.eps[0],
                                  c.kind == CurveKind::Line ? 1.0 : c.alpha[0]));
  if (t.empty()) return false;
  if (c.kind == CurveKind::Line) {
    return p.y >= Q.corner.y && p.y <= Q.corner.y + Q.side(1);
  }
  t = intersect(t, coord_interval(p.y, Q.corner.y, Q.side(1), c.eps[1],
                                  c.alpha[1]));
  return !t.empty();
}

}  // namespace

bool FlowSet::contains(Point2 p) const {
  if (curve_is_analytic(curve))
    return analytic_contains(curve, source, t0, t1, p);
  return raster.contains_point(p);
}

FlowSet flow_set(const CurveSpec& c, const AnisoCube& Q, const GridSpec& ambient,
                 int refinement) {
  Q.validate();
  ambient.validate();
  if (refinement < 1)
    throw std::invalid_argument("flow_set: refinement must be >= 1");
  double ell = Q.ell;
  double t0 = 9.0 * ell, t1 = 10.0 * ell;

  // Bounding box of the displaced cube union.
  Rect qr = Q.rect();
  double gx_lo, gx_hi, gy_lo, gy_hi;
  if (curve_is_analytic(c)) {
    Point2 a = eval_curve(c, t0), b = eval_curve(c, t1);
    gx_lo = std::min(a.x, b.x);
    gx_hi = std::max(a.x, b.x);
    gy_lo = std::min(a.y, b.y);
    gy_hi = std::max(a.y, b.y);
  } else {
    if (t1 > c.nodes.back())
      throw std::invalid_argument("flow_set: torsion window exceeds [-1, 1]");
    gx_lo = gy_lo = 1e300;
    gx_hi = gy_hi = -1e300;
    int steps = 4096;
    for (int k = 0; k <= steps; ++k) {
      Point2 g = eval_curve(c, t0 + (t1 - t0) * k / steps);
      gx_lo = std::min(gx_lo, g.x);
      gx_hi = std::max(gx_hi, g.x);
      gy_lo = std::min(gy_lo, g.y);
      gy_hi = std::max(gy_hi, g.y);
    }
  }
  Rect bbox{qr.x0 - gx_hi, qr.y0 - gy_hi, qr.x1 - gx_lo, qr.y1 - gy_lo};

  Rect dom = ambient.domain();
  if (!dom.contains(bbox) || !dom.contains(qr)) {
    double pad_x = std::max(dom.x0 - bbox.x0, bbox.x1 - dom.x1);
    double pad_y = std::max(dom.y0 - bbox.y0, bbox.y1 - dom.y1);
    throw std::invalid_argument(
        "flow_set: displaced cube exits the domain (needs padding x=" +
        std::to_string(std::max(0.0, pad_x)) +
        ", y=" + std::to_string(std::max(0.0, pad_y)) + ")");
  }

  FlowSet E;
  E.source = Q;
  E.curve = c;
  E.t0 = t0;
  E.t1 = t1;

  RasterMask& m = E.raster;
  m.cx = ambient.dx() / refinement;
  m.cy = ambient.dy() / refinement;
  // Grid-aligned raster window covering the bounding box.
  long i0 = static_cast<long>(std::floor((bbox.x0 - dom.x0) / m.cx));
  long j0 = static_cast<long>(std::floor((bbox.y0 - dom.y0) / m.cy));
  long i1 = static_cast<long>(std::ceil((bbox.x1 - dom.x0) / m.cx));
  long j1 = static_cast<long>(std::ceil((bbox.y1 - dom.y0) / m.cy));
  m.x0 = dom.x0 + i0 * m.cx;
  m.y0 = dom.y0 + j0 * m.cy;
  m.nxc = static_cast<int>(i1 - i0);
  m.nyc = static_cast<int>(j1 - j0);
  m.cells.assign(static_cast<std::size_t>(m.nxc) * m.nyc, 0);

  if (curve_is_analytic(c)) {
    for (int j = 0; j < m.nyc; ++j) {
      double py = m.y0 + (j + 0.5) * m.cy;
      for (int i = 0; i < m.nxc; ++i) {
        double px = m.x0 + (i + 0.5) * m.cx;
        if (analytic_contains(c, Q, t0, t1, {px, py}))
          m.cells[static_cast<std::size_t>(j) * m.nxc + i] = 1;
      }
    }
  } else {
    // Forward march: stamp Q - nu(t), stepping so the curve moves less
    // than a quarter cell per step.
    double speed = 0.0;
    for (const auto& d : c.deriv1)
      speed = std::max(speed, std::hypot(d.x, d.y));
    double h = 0.25 * std::min(m.cx, m.cy) / std::max(speed, 1e-12);
    int steps = std::max(16, static_cast<int>(std::ceil((t1 - t0) / h)));
    for (int k = 0; k <= steps; ++k) {
      Point2 g = eval_curve(c, t0 + (t1 - t0) * k / steps);
      Rect r{qr.x0 - g.x, qr.y0 - g.y, qr.x1 - g.x, qr.y1 - g.y};
      int ia = std::max(0, static_cast<int>(std::ceil((r.x0 - m.x0) / m.cx - 0.5)));
      int ib = std::min(m.nxc - 1,
                        static_cast<int>(std::floor((r.x1 - m.x0) / m.cx - 0.5)));
      int ja = std::max(0, static_cast<int>(std::ceil((r.y0 - m.y0) / m.cy - 0.5)));
      int jb = std::min(m.nyc - 1,
                        static_cast<int>(std::floor((r.y1 - m.y0) / m.cy - 0.5)));
      for (int j = ja; j <= jb; ++j)
        for (int i = ia; i <= ib; ++i)
          m.cells[static_cast<std::size_t>(j) * m.nxc + i] = 1;
    }
  }

  E.measure = m.measure();
  if (!(E.measure > 0.0))
    throw std::runtime_error("flow_set: empty raster (refinement too coarse)");
  return E;
}

TimeSet time_set(const CurveSpec& c, Point2 x, const FlowSet& E) {
  double ell = E.source.ell;
  double lo = std::max(E.t0 - ell, 1e-300);
  double hi = E.t1 + ell;
  double step = ell / 1024.0;
  int n = static_cast<int>(std::ceil((hi - lo) / step));

  TimeSet ts;
  ts.base = x;
  bool in_run = false;
  double run_lo = 0.0, run_hi = 0.0;
  for (int k = 0; k <= n; ++k) {
    double t = std::min(lo + k * step, hi);
    Point2 g = eval_curve(c, t);
    bool hit = E.contains({x.x - g.x, x.y - g.y});
    if (hit) {
      if (!in_run) {
        in_run = true;
        run_lo = t;
      }
      run_hi = t;
    } else if (in_run) {
      in_run = false;
      ts.intervals.emplace_back(run_lo, run_hi);
    }
  }
  if (in_run) ts.intervals.emplace_back(run_lo, run_hi);
  for (auto& [a, b] : ts.intervals)
    if (b > a) ts.mu += std::log(b / a);
  return ts;
}

std::string raster_to_pgm(const RasterMask& m) {
  std::ostringstream os;
  os << "P2\n" << m.nxc << " " << m.nyc << "\n1\n";
  // Top row first, per image convention.
  for (int j = m.nyc - 1; j >= 0; --j) {
    for (int i = 0; i < m.nxc; ++i) os << (m.cell(i, j) ? 1 : 0) << (i + 1 < m.nxc ? " " : "");
    os << "\n";
  }
  return os.str();
}

std::string time_set_to_csv(const TimeSet& ts) {
  std::ostringstream os;
  os << "x,y,interval_lo,interval_hi,mu\n";
  os.precision(17);
  for (const auto& [a, b] : ts.intervals)
    os << ts.base.x << "," << ts.base.y << "," << a << "," << b << "," << ts.mu
       << "\n";
  if (ts.intervals.empty())
    os << ts.base.x << "," << ts.base.y << ",,," << ts.mu << "\n";
  return os.str();
}

}  // namespace curvelab
