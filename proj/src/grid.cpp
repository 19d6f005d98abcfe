#include "curvelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace curvelab {

namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

long wrap_index(long i, int n) {
  long r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

bool GridSpec::operator==(const GridSpec& o) const {
  return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly &&
         origin.x == o.origin.x && origin.y == o.origin.y;
}

void GridSpec::validate() const {
  if (nx < 4 || ny < 4 || !is_pow2(nx) || !is_pow2(ny))
    throw std::invalid_argument("GridSpec: nx, ny must be powers of two >= 4");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("GridSpec: domain lengths must be positive");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
    throw std::invalid_argument("GridSpec: origin must be finite");
}

ScalarField2D::ScalarField2D(GridSpec spec, double fill) : spec_(spec) {
  spec_.validate();
  values_.assign(spec_.size(), fill);
}

ScalarField2D::ScalarField2D(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size())
    throw std::invalid_argument("ScalarField2D: value count mismatch");
}

double ScalarField2D::at_wrapped(int i, int j) const {
  return values_[static_cast<std::size_t>(wrap_index(j, spec_.ny)) * spec_.nx +
                 wrap_index(i, spec_.nx)];
}

double ScalarField2D::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField2D::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField2D::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField2D::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

ScalarField2D field_from_fn(const GridSpec& spec,
                            const std::function<double(double, double)>& fn) {
  spec.validate();
  ScalarField2D f(spec);
  for (int j = 0; j < spec.ny; ++j) {
    double y = spec.origin.y + j * spec.dy();
    for (int i = 0; i < spec.nx; ++i) {
      double x = spec.origin.x + i * spec.dx();
      double v = fn(x, y);
      if (!std::isfinite(v))
        throw std::invalid_argument("field_from_fn: non-finite sample at (" +
                                    std::to_string(x) + ", " +
                                    std::to_string(y) + ")");
      f.at(i, j) = v;
    }
  }
  return f;
}

double sample_at(const ScalarField2D& f, Point2 p) {
  const GridSpec& s = f.spec();
  double u = (p.x - s.origin.x) / s.dx();
  double v = (p.y - s.origin.y) / s.dy();
  double fu = std::floor(u), fv = std::floor(v);
  double ax = u - fu, ay = v - fv;
  long i0 = static_cast<long>(fu), j0 = static_cast<long>(fv);
  long i0w = wrap_index(i0, s.nx), j0w = wrap_index(j0, s.ny);
  long i1w = wrap_index(i0 + 1, s.nx), j1w = wrap_index(j0 + 1, s.ny);
  double v00 = f.at(static_cast<int>(i0w), static_cast<int>(j0w));
  double v10 = f.at(static_cast<int>(i1w), static_cast<int>(j0w));
  double v01 = f.at(static_cast<int>(i0w), static_cast<int>(j1w));
  double v11 = f.at(static_cast<int>(i1w), static_cast<int>(j1w));
  return (1 - ax) * (1 - ay) * v00 + ax * (1 - ay) * v10 +
         (1 - ax) * ay * v01 + ax * ay * v11;
}

namespace {

// Per-axis clipped cell weights for the cell-centered model: node i owns
// [x_i - d/2, x_i + d/2]. Returns (first index, overlap lengths).
std::pair<long, std::vector<double>> axis_weights(double r0, double r1,
                                                  double org, double d) {
  long i0 = static_cast<long>(std::floor((r0 - org) / d + 0.5));
  long i1 = static_cast<long>(std::floor((r1 - org) / d + 0.5));
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(i1 - i0 + 1));
  for (long i = i0; i <= i1; ++i) {
    double lo = org + (i - 0.5) * d;
    double hi = lo + d;
    w.push_back(std::max(0.0, std::min(hi, r1) - std::max(lo, r0)));
  }
  return {i0, std::move(w)};
}

template <typename CellFn>
double clipped_rect_sum(const ScalarField2D& f, const Rect& rect, CellFn fn) {
  const GridSpec& s = f.spec();
  auto [ix0, wx] = axis_weights(rect.x0, rect.x1, s.origin.x, s.dx());
  auto [jy0, wy] = axis_weights(rect.y0, rect.y1, s.origin.y, s.dy());
  double total = 0.0;
  for (std::size_t j = 0; j < wy.size(); ++j) {
    if (wy[j] == 0.0) continue;
    long jw = wrap_index(jy0 + static_cast<long>(j), s.ny);
    double row = 0.0;
    for (std::size_t i = 0; i < wx.size(); ++i) {
      if (wx[i] == 0.0) continue;
      long iw = wrap_index(ix0 + static_cast<long>(i), s.nx);
      row += wx[i] * fn(f.at(static_cast<int>(iw), static_cast<int>(jw)));
    }
    total += wy[j] * row;
  }
  return total;
}

}  // namespace

double average_over_rect(const ScalarField2D& f, const Rect& rect) {
  if (!(rect.area() > 0.0))
    throw std::invalid_argument("average_over_rect: rectangle has zero area");
  return clipped_rect_sum(f, rect, [](double v) { return v; }) / rect.area();
}

double average_abs_dev_over_rect(const ScalarField2D& f, const Rect& rect,
                                 double c) {
  if (!(rect.area() > 0.0))
    throw std::invalid_argument(
        "average_abs_dev_over_rect: rectangle has zero area");
  return clipped_rect_sum(f, rect,
                          [c](double v) { return std::abs(v - c); }) /
         rect.area();
}

double inner_product(const ScalarField2D& f, const ScalarField2D& g) {
  if (!(f.spec() == g.spec()))
    throw std::invalid_argument("inner_product: grid specs differ");
  double s = 0.0;
  const auto& a = f.values();
  const auto& b = g.values();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * f.spec().dx() * f.spec().dy();
}

double lp_norm(const ScalarField2D& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.spec().dx() * f.spec().dy(), 1.0 / p);
}

namespace {

ScalarField2D zip(const ScalarField2D& f, const ScalarField2D& g,
                  double (*op)(double, double)) {
  if (!(f.spec() == g.spec()))
    throw std::invalid_argument("field arithmetic: grid specs differ");
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = op(f.values()[i], g.values()[i]);
  return ScalarField2D(f.spec(), std::move(out));
}

}  // namespace

ScalarField2D add(const ScalarField2D& f, const ScalarField2D& g) {
  return zip(f, g, [](double a, double b) { return a + b; });
}

ScalarField2D sub(const ScalarField2D& f, const ScalarField2D& g) {
  return zip(f, g, [](double a, double b) { return a - b; });
}

ScalarField2D mul(const ScalarField2D& f, const ScalarField2D& g) {
  return zip(f, g, [](double a, double b) { return a * b; });
}

ScalarField2D scale(const ScalarField2D& f, double a) {
  std::vector<double> out(f.values());
  for (double& v : out) v *= a;
  return ScalarField2D(f.spec(), std::move(out));
}

ScalarField2D shift(const ScalarField2D& f, double c) {
  std::vector<double> out(f.values());
  for (double& v : out) v += c;
  return ScalarField2D(f.spec(), std::move(out));
}

ScalarField2D map(const ScalarField2D& f,
                  const std::function<double(double)>& fn) {
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = fn(f.values()[i]);
    if (!std::isfinite(out[i]))
      throw std::invalid_argument("map: non-finite result");
  }
  return ScalarField2D(f.spec(), std::move(out));
}

}  // namespace curvelab
