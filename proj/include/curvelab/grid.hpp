#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace curvelab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(Point2 p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }
};

// Uniform periodic 2-D grid. Sample counts must be powers of two (>= 4)
// so the Fourier route and dyadic cube alignment work without remainder.
struct GridSpec {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  Point2 origin{0.0, 0.0};

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  Rect domain() const {
    return Rect{origin.x, origin.y, origin.x + lx, origin.y + ly};
  }
  bool operator==(const GridSpec& o) const;

  // Throws std::invalid_argument on a malformed spec.
  void validate() const;
};

// Sampled real field on a periodic grid. Node (i, j) sits at
// origin + (i*dx, j*dy) and represents the cell centered there.
// Immutable by convention after construction; all operations are pure.
class ScalarField2D {
 public:
  ScalarField2D() = default;
  ScalarField2D(GridSpec spec, double fill = 0.0);
  ScalarField2D(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double at(int i, int j) const { return values_[idx(i, j)]; }
  double& at(int i, int j) { return values_[idx(i, j)]; }
  // Periodic index wrap.
  double at_wrapped(int i, int j) const;

  Point2 node(int i, int j) const {
    return {spec_.origin.x + i * spec_.dx(), spec_.origin.y + j * spec_.dy()};
  }

  double min_value() const;
  double max_value() const;
  double max_abs() const;
  bool all_finite() const;

  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * spec_.nx + i;
  }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

// Exact pointwise sampling of fn on the grid nodes. Rejects non-finite
// samples, reporting the offending grid point.
ScalarField2D field_from_fn(const GridSpec& spec,
                            const std::function<double(double, double)>& fn);

// Bilinear interpolation with periodic wrap; exact on grid nodes.
double sample_at(const ScalarField2D& f, Point2 p);

// (1/|rect|) * integral of f over rect, cell-clipped: partial cells are
// weighted by their overlap fraction, indices wrap periodically.
double average_over_rect(const ScalarField2D& f, const Rect& rect);

// Same clipped integration applied to |f - c|; used by the oscillation
// functionals.
double average_abs_dev_over_rect(const ScalarField2D& f, const Rect& rect,
                                 double c);

// Riemann inner product sum(f*g)*dx*dy; specs must match.
double inner_product(const ScalarField2D& f, const ScalarField2D& g);

// (sum |f|^p dx dy)^{1/p}, p >= 1.
double lp_norm(const ScalarField2D& f, double p);

ScalarField2D add(const ScalarField2D& f, const ScalarField2D& g);
ScalarField2D sub(const ScalarField2D& f, const ScalarField2D& g);
ScalarField2D mul(const ScalarField2D& f, const ScalarField2D& g);
ScalarField2D scale(const ScalarField2D& f, double a);
ScalarField2D shift(const ScalarField2D& f, double c);

// Pointwise map; checks the result for finiteness.
ScalarField2D map(const ScalarField2D& f,
                  const std::function<double(double)>& fn);

}  // namespace curvelab
