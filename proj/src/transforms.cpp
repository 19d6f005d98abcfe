#include "curvelab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "curvelab/fft.hpp"

namespace curvelab {

QuadratureSpec QuadratureSpec::defaults(const GridSpec& spec) {
  QuadratureSpec q;
  q.eps = spec.dx() / 16.0;
  q.T = std::min(spec.lx, spec.ly) / 4.0;
  q.nodes_per_dyad = 32;
  return q;
}

void QuadratureSpec::validate() const {
  if (!(eps > 0.0) || !(T > eps))
    throw std::invalid_argument("QuadratureSpec: need 0 < eps < T");
  if (nodes_per_dyad < 8)
    throw std::invalid_argument("QuadratureSpec: nodes_per_dyad must be >= 8");
}

QuadNodes make_log_nodes(const QuadratureSpec& q) {
  q.validate();
  double u0 = std::log(q.eps), u1 = std::log(q.T);
  int n = std::max(
      2, static_cast<int>(std::ceil(q.nodes_per_dyad * (u1 - u0) / std::numbers::ln2)));
  double du = (u1 - u0) / n;
  QuadNodes nodes;
  nodes.t.resize(n + 1);
  nodes.w.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    nodes.t[k] = std::exp(u0 + k * du);
    nodes.w[k] = (k == 0 || k == n) ? 0.5 * du : du;
  }
  return nodes;
}

std::vector<double> hilbert_1d(const std::vector<double>& f) {
  int n = static_cast<int>(f.size());
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("hilbert_1d: length must be a power of two");
  cvec in(n);
  for (int i = 0; i < n; ++i) in[i] = f[i];
  cvec hat = fft1(in, false);
  const std::complex<double> mi(0.0, -std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    int s = (k == 0 || k == n / 2) ? 0 : (k < n / 2 ? 1 : -1);
    hat[k] *= mi * static_cast<double>(s);
  }
  cvec out = fft1(hat, true);
  std::vector<double> res(n);
  for (int i = 0; i < n; ++i) res[i] = out[i].real();
  return res;
}

namespace {

void check_truncation(const GridSpec& spec, const QuadratureSpec& q) {
  if (q.T > 0.5 * std::min(spec.lx, spec.ly) + 1e-12)
    throw std::invalid_argument(
        "quadrature T exceeds half the domain (periodic wrap contamination)");
}

ScalarField2D direct_quadrature(const ScalarField2D& f, const CurveSpec& c,
                                const QuadratureSpec& q) {
  check_truncation(f.spec(), q);
  QuadNodes nodes = make_log_nodes(q);
  std::size_t n = nodes.t.size();
  std::vector<Point2> gp(n), gm(n);
  for (std::size_t k = 0; k < n; ++k) {
    gp[k] = eval_curve(c, nodes.t[k]);
    gm[k] = eval_curve(c, -nodes.t[k]);
  }
  const GridSpec& s = f.spec();
  ScalarField2D out(s);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      Point2 x = out.node(i, j);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += nodes.w[k] *
               (sample_at(f, {x.x - gp[k].x, x.y - gp[k].y}) -
                sample_at(f, {x.x - gm[k].x, x.y - gm[k].y}));
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

ScalarField2D curved_hilbert_direct(const ScalarField2D& f, const CurveSpec& c,
                                    const QuadratureSpec& q) {
  if (c.kind == CurveKind::Torsion)
    throw std::invalid_argument(
        "curved_hilbert_direct: torsion curves use torsion_hilbert_truncated");
  return direct_quadrature(f, c, q);
}

ScalarField2D torsion_hilbert_truncated(const ScalarField2D& f,
                                        const CurveSpec& c,
                                        const QuadratureSpec& q) {
  if (q.T > 1.0)
    throw std::invalid_argument(
        "torsion_hilbert_truncated: truncated to a local operator, T must be <= 1");
  return direct_quadrature(f, c, q);
}

double MultiplierTable::max_abs() const {
  double v = 0.0;
  for (const auto& z : m) v = std::max(v, std::abs(z));
  return v;
}

std::string MultiplierTable::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << curve_tag << "_g" << spec.nx << "x" << spec.ny << "_" << spec.lx << "x"
     << spec.ly << "_q" << quad.eps << "_" << quad.T << "_" << quad.nodes_per_dyad;
  return os.str();
}

MultiplierTable build_multiplier(const CurveSpec& c, const GridSpec& spec,
                                 const QuadratureSpec& q) {
  if (c.kind == CurveKind::Torsion)
    throw std::invalid_argument("build_multiplier: analytic curves only");
  spec.validate();
  QuadNodes nodes = make_log_nodes(q);

  MultiplierTable tab;
  tab.spec = spec;
  tab.quad = q;
  tab.curve_tag = c.tag();
  tab.m.assign(spec.size(), {0.0, 0.0});

  // Separable phases: e^{-i xi . gamma} factors per axis, so each node
  // costs nx + ny exponentials plus one rank-one accumulation.
  std::vector<std::complex<double>> px(spec.nx), py(spec.ny);
  auto phase_row = [](std::vector<std::complex<double>>& dst, int n, double l,
                      double g) {
    for (int k = 0; k < n; ++k) {
      int ks = k < n / 2 ? k : k - n;
      double xi = 2.0 * std::numbers::pi * ks / l;
      dst[k] = std::polar(1.0, -xi * g);
    }
  };
  for (std::size_t k = 0; k < nodes.t.size(); ++k) {
    const Point2 pair[2] = {eval_curve(c, nodes.t[k]),
                            eval_curve(c, -nodes.t[k])};
    for (int half = 0; half < 2; ++half) {
      const Point2& g = pair[half];
      double sgn = half == 0 ? 1.0 : -1.0;
      phase_row(px, spec.nx, spec.lx, g.x);
      phase_row(py, spec.ny, spec.ly, g.y);
      double w = sgn * nodes.w[k];
      for (int j = 0; j < spec.ny; ++j) {
        std::complex<double> wy = w * py[j];
        auto* row = tab.m.data() + static_cast<std::size_t>(j) * spec.nx;
        for (int i = 0; i < spec.nx; ++i) row[i] += wy * px[i];
      }
    }
  }

  // Enforce Hermitian symmetry so the operator maps real to real.
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      int in = (spec.nx - i) % spec.nx;
      int jn = (spec.ny - j) % spec.ny;
      std::size_t a = static_cast<std::size_t>(j) * spec.nx + i;
      std::size_t b = static_cast<std::size_t>(jn) * spec.nx + in;
      if (a > b) continue;
      std::complex<double> avg = 0.5 * (tab.m[a] + std::conj(tab.m[b]));
      tab.m[a] = avg;
      tab.m[b] = std::conj(avg);
    }
  }
  return tab;
}

namespace {

ScalarField2D apply_multiplier(const ScalarField2D& f,
                               const MultiplierTable& tab, bool adjoint) {
  if (!(f.spec() == tab.spec))
    throw std::invalid_argument("curved_hilbert_fourier: spec mismatch");
  const GridSpec& s = f.spec();
  cvec in(s.size());
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = f.values()[k];
  cvec hat = fft2(in, s.nx, s.ny, false);
  for (std::size_t k = 0; k < hat.size(); ++k)
    hat[k] *= adjoint ? std::conj(tab.m[k]) : tab.m[k];
  cvec out = fft2(hat, s.nx, s.ny, true);
  double max_re = 0.0, max_im = 0.0;
  for (const auto& z : out) {
    max_re = std::max(max_re, std::abs(z.real()));
    max_im = std::max(max_im, std::abs(z.imag()));
  }
  if (max_im > 1e-9 * std::max(1.0, max_re))
    throw std::runtime_error(
        "curved_hilbert_fourier: large imaginary residue (broken Hermitian "
        "symmetry)");
  std::vector<double> vals(out.size());
  for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = out[k].real();
  return ScalarField2D(s, std::move(vals));
}

}  // namespace

ScalarField2D curved_hilbert_fourier(const ScalarField2D& f,
                                     const MultiplierTable& m) {
  return apply_multiplier(f, m, false);
}

ScalarField2D curved_hilbert_fourier_adjoint(const ScalarField2D& f,
                                             const MultiplierTable& m) {
  return apply_multiplier(f, m, true);
}

ScalarField2D line_hilbert(const ScalarField2D& f) {
  const GridSpec& s = f.spec();
  ScalarField2D out(s);
  std::vector<double> row(s.nx);
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) row[i] = f.at(i, j);
    std::vector<double> h = hilbert_1d(row);
    for (int i = 0; i < s.nx; ++i) out.at(i, j) = h[i];
  }
  return out;
}

std::string multiplier_to_bytes(const MultiplierTable& tab) {
  std::ostringstream os(std::ios::binary);
  auto put = [&os](const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  };
  std::int64_t nx = tab.spec.nx, ny = tab.spec.ny;
  put(&nx, 8);
  put(&ny, 8);
  put(&tab.spec.lx, 8);
  put(&tab.spec.ly, 8);
  put(&tab.spec.origin.x, 8);
  put(&tab.spec.origin.y, 8);
  put(&tab.quad.eps, 8);
  put(&tab.quad.T, 8);
  std::int64_t npd = tab.quad.nodes_per_dyad;
  put(&npd, 8);
  std::int64_t taglen = static_cast<std::int64_t>(tab.curve_tag.size());
  put(&taglen, 8);
  put(tab.curve_tag.data(), tab.curve_tag.size());
  put(tab.m.data(), tab.m.size() * sizeof(std::complex<double>));
  return os.str();
}

MultiplierTable multiplier_from_bytes(const std::string& bytes) {
  std::size_t off = 0;
  auto get = [&](void* p, std::size_t n) {
    if (off + n > bytes.size())
      throw std::invalid_argument("multiplier_from_bytes: truncated data");
    std::memcpy(p, bytes.data() + off, n);
    off += n;
  };
  MultiplierTable tab;
  std::int64_t nx, ny, npd, taglen;
  get(&nx, 8);
  get(&ny, 8);
  tab.spec.nx = static_cast<int>(nx);
  tab.spec.ny = static_cast<int>(ny);
  get(&tab.spec.lx, 8);
  get(&tab.spec.ly, 8);
  get(&tab.spec.origin.x, 8);
  get(&tab.spec.origin.y, 8);
  get(&tab.quad.eps, 8);
  get(&tab.quad.T, 8);
  get(&npd, 8);
  tab.quad.nodes_per_dyad = static_cast<int>(npd);
  get(&taglen, 8);
  tab.curve_tag.resize(static_cast<std::size_t>(taglen));
  get(tab.curve_tag.data(), tab.curve_tag.size());
  tab.m.resize(tab.spec.size());
  get(tab.m.data(), tab.m.size() * sizeof(std::complex<double>));
  return tab;
}

}  // namespace curvelab
