#include "curvelab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "curvelab/commutator.hpp"
#include "curvelab/cubes.hpp"
#include "curvelab/curves.hpp"
#include "curvelab/grid.hpp"
#include "curvelab/io.hpp"
#include "curvelab/oscillation.hpp"
#include "curvelab/presets.hpp"
#include "curvelab/sparse.hpp"
#include "curvelab/transforms.hpp"
#include "curvelab/weights.hpp"

namespace curvelab {

namespace {

using nlohmann::json;

// Haar-measure window for the flow time set: the time interval
// [9l, 10l] contributes at least ln(10/9), and first-coordinate
// confinement limits the time set to [8l, 11l], hence at most ln(11/8).
constexpr double kMuLo = 0.10536;
constexpr double kMuHi = 0.31845;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Mutable pieces of a report under construction.
struct Builder {
  json results = json::object();
  json flags = json::object();
  json timings = json::object();
  std::ostringstream text;
  std::vector<std::pair<std::string, std::string>> artifacts;

  void flag(const std::string& name, bool ok, const std::string& line) {
    flags[name] = ok;
    text << (ok ? "[pass] " : "[FAIL] ") << name << ": " << line << "\n";
  }
};

double jget(const json& p, const char* key, double dflt) {
  return p.contains(key) ? p.at(key).get<double>() : dflt;
}
int jgeti(const json& p, const char* key, int dflt) {
  return p.contains(key) ? p.at(key).get<int>() : dflt;
}
std::string jgets(const json& p, const char* key, const std::string& dflt) {
  return p.contains(key) ? p.at(key).get<std::string>() : dflt;
}

CurveSpec curve_from_name(const std::string& name) {
  if (name == "parabola") return CurveSpec::parabola();
  if (name == "line") return CurveSpec::line();
  if (name == "monomial13")
    return CurveSpec::monomial({1.0, 3.0}, {1, 1}, {-1, -1});
  if (name == "odd-parabola")
    return CurveSpec::monomial({1.0, 2.0}, {1, 1}, {-1, -1});
  throw std::invalid_argument(
      "unknown curve '" + name +
      "'; valid: parabola, line, monomial13, odd-parabola");
}

GridSpec unit_grid(int n) {
  GridSpec s;
  s.nx = s.ny = n;
  s.lx = s.ly = 1.0;
  return s;
}

// Ambient grid that contains a cube anchored at the origin together with
// its flow set, with half-a-cube padding on every side.
GridSpec flow_ambient(const CurveSpec& c, const AnisoCube& Q, int n) {
  double t0 = 9.0 * Q.ell, t1 = 10.0 * Q.ell;
  Point2 a = eval_curve(c, t0), b = eval_curve(c, t1);
  Rect qr = Q.rect();
  double x_lo = std::min(qr.x0, qr.x0 - std::max(a.x, b.x));
  double x_hi = std::max(qr.x1, qr.x1 - std::min(a.x, b.x));
  double y_lo = std::min(qr.y0, qr.y0 - std::max(a.y, b.y));
  double y_hi = std::max(qr.y1, qr.y1 - std::min(a.y, b.y));
  double pad_x = 0.5 * Q.side(0), pad_y = 0.5 * Q.side(1);
  GridSpec s;
  s.nx = s.ny = n;
  s.origin = {x_lo - pad_x, y_lo - pad_y};
  s.lx = (x_hi - x_lo) + 2.0 * pad_x;
  s.ly = (y_hi - y_lo) + 2.0 * pad_y;
  return s;
}

ScalarField2D make_symbol(const GridSpec& spec, const std::string& preset,
                          const json& pp, std::uint64_t seed) {
  Point2 center{spec.origin.x + 0.5 * spec.lx, spec.origin.y + 0.5 * spec.ly};
  if (preset == "smooth-random")
    return preset_smooth_random(spec, seed, jgeti(pp, "max_mode", 4),
                                jget(pp, "decay", 2.0));
  if (preset == "two-level")
    return preset_two_level(spec, jget(pp, "scale_coarse", 0.25),
                            jget(pp, "scale_fine", 1.0 / 32.0));
  if (preset == "log-parabolic")
    return preset_log_parabolic(
        spec, {jget(pp, "cx", center.x), jget(pp, "cy", center.y)},
        jget(pp, "cap", 12.0));
  if (preset == "jump-plus-spike")
    return preset_jump_plus_spike(spec, jget(pp, "jump_x", center.x),
                               jget(pp, "y0", center.y), jget(pp, "cap", 40.0));
  if (preset == "sine-log-product")
    return preset_sine_log_product(spec, jget(pp, "y0", center.y),
                                   jgeti(pp, "m", 4));
  std::string all;
  for (const auto& n : preset_names()) all += (all.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown preset '" + preset + "'; valid: " + all);
}

// Mixed suite for the chain and weight experiments: the four structured
// presets plus seeded band-limited fields of varying spectra.
std::vector<std::pair<std::string, ScalarField2D>> symbol_suite(
    const GridSpec& spec, int count, std::uint64_t seed) {
  std::vector<std::pair<std::string, ScalarField2D>> out;
  Point2 c{spec.origin.x + 0.5 * spec.lx, spec.origin.y + 0.5 * spec.ly};
  // Cap the logarithmic spike at the largest value one cell can honestly
  // average: deeper values are invisible at this resolution and would
  // only distort the capped cell.
  double log_cap = std::log(static_cast<double>(std::min(spec.nx, spec.ny)));
  if (count > 0) out.emplace_back("two-level", preset_two_level(spec));
  if (count > 1)
    out.emplace_back("log-parabolic", preset_log_parabolic(spec, c, log_cap));
  if (count > 2)
    out.emplace_back("jump-plus-spike",
                     preset_jump_plus_spike(spec, c.x, c.y, 12.0));
  if (count > 3)
    out.emplace_back("sine-log-product",
                     preset_sine_log_product(spec, c.y, 4));
  int i = 0;
  while (static_cast<int>(out.size()) < count) {
    int max_mode = 3 + (i % 5);
    double decay = 1.5 + 0.5 * (i % 3);
    std::ostringstream name;
    name << "smooth-random-" << i;
    out.emplace_back(name.str(),
                     preset_smooth_random(spec, seed + i, max_mode, decay));
    ++i;
  }
  return out;
}

double rel_l2(const ScalarField2D& a, const ScalarField2D& ref) {
  return lp_norm(sub(a, ref), 2.0) / lp_norm(ref, 2.0);
}

std::vector<double> cumulative_per_scale(const OscillationReport& rep) {
  std::vector<double> cum;
  double best = 0.0;
  for (const auto& [scale, mx] : rep.per_scale) {
    (void)scale;
    best = std::max(best, mx);
    cum.push_back(best);
  }
  return cum;
}

// ---------------------------------------------------------------------
// geometry: Haar-measure bounds and flow-measure uniformity.
// ---------------------------------------------------------------------
void run_geometry(const ExperimentConfig& cfg, Builder& b) {
  CurveSpec curve = curve_from_name(jgets(cfg.params, "curve", "parabola"));
  int refinement = jgeti(cfg.params, "refinement", 16);
  int lattice = jgeti(cfg.params, "lattice", 64);
  std::vector<double> ells = {0.25, 0.5, 1.0};
  bool assert_range = curve.kind == CurveKind::Parabola;

  // Haar-measure bounds at every lattice point of one cube.
  {
    Timer t;
    AnisoCube Q{{0.0, 0.0}, ells[0], curve.alpha};
    GridSpec ambient = flow_ambient(curve, Q, 512);
    FlowSet E = flow_set(curve, Q, ambient, 4);
    double mu_min = 1e300, mu_max = 0.0;
    std::ostringstream csv;
    csv << "x,y,mu\n";
    csv.precision(17);
    for (int j = 0; j < lattice; ++j) {
      for (int i = 0; i < lattice; ++i) {
        Point2 x{Q.corner.x + Q.side(0) * i / (lattice - 1),
                 Q.corner.y + Q.side(1) * j / (lattice - 1)};
        double mu = time_set(curve, x, E).mu;
        mu_min = std::min(mu_min, mu);
        mu_max = std::max(mu_max, mu);
        csv << x.x << "," << x.y << "," << mu << "\n";
      }
    }
    b.results["mu_min"] = mu_min;
    b.results["mu_max"] = mu_max;
    b.timings["haar_ms"] = t.ms();
    b.artifacts.emplace_back("haar_mu.csv", csv.str());
    std::ostringstream line;
    line << "mu in [" << mu_min << ", " << mu_max << "], required ["
         << kMuLo - 1e-3 << ", " << kMuHi + 1e-3 << "]";
    b.flag("haar_bounds", mu_min >= kMuLo - 1e-3 && mu_max <= kMuHi + 1e-3,
           line.str());
  }

  // Flow-measure ratio |E_Q| / |Q| across scales.
  {
    Timer t;
    std::vector<double> ratios;
    std::ostringstream csv;
    csv << "ell,flow_measure,cube_measure,ratio\n";
    csv.precision(17);
    for (double ell : ells) {
      AnisoCube Q{{0.0, 0.0}, ell, curve.alpha};
      GridSpec ambient = flow_ambient(curve, Q, 512);
      FlowSet E = flow_set(curve, Q, ambient, refinement);
      double ratio = E.measure / Q.measure();
      ratios.push_back(ratio);
      csv << ell << "," << E.measure << "," << Q.measure() << "," << ratio
          << "\n";
    }
    double lo = *std::min_element(ratios.begin(), ratios.end());
    double hi = *std::max_element(ratios.begin(), ratios.end());
    b.results["ratio_min"] = lo;
    b.results["ratio_max"] = hi;
    b.timings["flow_ms"] = t.ms();
    b.artifacts.emplace_back("flow_ratios.csv", csv.str());
    std::ostringstream l1;
    l1 << "|E_Q|/|Q| spread " << (hi - lo) / lo << " over ell in {1/4, 1/2, 1}";
    b.flag("flow_uniform", (hi - lo) / lo <= 0.02, l1.str());
    if (assert_range) {
      std::ostringstream l2;
      l2 << "|E_Q|/|Q| in [" << lo << ", " << hi << "], required [20, 40]";
      b.flag("flow_range", lo >= 20.0 && hi <= 40.0, l2.str());
    }
  }
}

// ---------------------------------------------------------------------
// transform-check: route equivalence, odd-curve antisymmetry, adjoint
// consistency, anisotropic dilation covariance of the symbol.
// ---------------------------------------------------------------------
void run_transform_check(const ExperimentConfig& cfg, Builder& b) {
  CurveSpec curve = curve_from_name(jgets(cfg.params, "curve", "parabola"));
  GridSpec spec = unit_grid(jgeti(cfg.params, "n", 128));
  ScalarField2D f =
      make_symbol(spec, jgets(cfg.params, "preset", "smooth-random"),
                  cfg.params.value("preset_params", json::object()), cfg.seed);

  QuadratureSpec q = QuadratureSpec::defaults(spec);
  QuadratureSpec q_ref = q;
  q_ref.nodes_per_dyad = 128;

  Timer t_route;
  MultiplierTable ref = build_multiplier(curve, spec, q_ref);
  ScalarField2D h_ref = curved_hilbert_fourier(f, ref);
  std::vector<int> npds = {8, 16, 32};
  std::vector<double> errs;
  std::ostringstream csv;
  csv << "nodes_per_dyad,rel_l2_error\n";
  csv.precision(17);
  for (int npd : npds) {
    QuadratureSpec qq = q;
    qq.nodes_per_dyad = npd;
    errs.push_back(rel_l2(curved_hilbert_direct(f, curve, qq), h_ref));
    csv << npd << "," << errs.back() << "\n";
  }
  b.timings["route_ms"] = t_route.ms();
  b.artifacts.emplace_back("route_errors.csv", csv.str());
  b.results["route_errors"] = errs;
  {
    std::ostringstream line;
    line << "errors " << errs[0] << " -> " << errs[1] << " -> " << errs[2];
    b.flag("route_monotone", errs[0] > errs[1] && errs[1] > errs[2],
           line.str());
    b.flag("route_final", errs[2] <= 1e-2,
           "finest direct route within 1e-2 of the high-resolution symbol");
  }

  // Adjoint consistency of the symbol route: <Hf, g> = <f, H*g>.
  {
    ScalarField2D g = preset_smooth_random(spec, cfg.seed + 1, 5, 2.0);
    double lhs = inner_product(curved_hilbert_fourier(f, ref), g);
    double rhs = inner_product(f, curved_hilbert_fourier_adjoint(g, ref));
    double scale_ = lp_norm(f, 2.0) * lp_norm(g, 2.0) * ref.max_abs();
    b.results["adjoint_gap"] = std::abs(lhs - rhs);
    b.flag("adjoint_consistent", std::abs(lhs - rhs) <= 1e-10 * scale_,
           "pairing agrees between the symbol and its conjugate");
  }

  // Odd curves (gamma(-t) = -gamma(t)) have a purely imaginary symbol;
  // the plain parabola does not, so this is asserted on odd companions.
  {
    for (const char* name : {"line", "odd-parabola"}) {
      MultiplierTable m = build_multiplier(curve_from_name(name), spec, q);
      double re_max = 0.0;
      for (const auto& z : m.m) re_max = std::max(re_max, std::abs(z.real()));
      std::ostringstream line;
      line << name << ": max |Re m| = " << re_max << " vs max |m| "
           << m.max_abs();
      b.flag(std::string("imaginary_symbol_") + name,
             re_max <= 1e-8 * std::max(1.0, m.max_abs()), line.str());
    }
    double re_parab = 0.0;
    MultiplierTable mp = build_multiplier(CurveSpec::parabola(), spec, q);
    for (const auto& z : mp.m) re_parab = std::max(re_parab, std::abs(z.real()));
    // Recorded, not asserted small: the even second component keeps the
    // parabola's symbol genuinely complex.
    b.results["parabola_symbol_max_re"] = re_parab;
  }

  // Dilation covariance: with the quadrature window scaled by lambda, the
  // symbol at the anisotropically scaled frequency reproduces exactly.
  {
    MultiplierTable m1 = build_multiplier(curve, spec, q);
    QuadratureSpec q2 = q;
    q2.eps *= 2.0;
    q2.T *= 2.0;
    MultiplierTable m2 = build_multiplier(curve, spec, q2);
    int s0 = static_cast<int>(std::lround(std::pow(2.0, curve.alpha[0])));
    int s1 = static_cast<int>(std::lround(std::pow(2.0, curve.alpha[1])));
    double worst = 0.0;
    auto mode = [&](const MultiplierTable& m, int k1, int k2) {
      int i = (k1 % spec.nx + spec.nx) % spec.nx;
      int j = (k2 % spec.ny + spec.ny) % spec.ny;
      return m.m[static_cast<std::size_t>(j) * spec.nx + i];
    };
    int k1_max = spec.nx / (2 * s0) - 1, k2_max = spec.ny / (2 * s1) - 1;
    for (int k2 = -k2_max; k2 <= k2_max; ++k2)
      for (int k1 = -k1_max; k1 <= k1_max; ++k1)
        worst = std::max(worst, std::abs(mode(m1, s0 * k1, s1 * k2) -
                                         mode(m2, k1, k2)));
    b.results["dilation_gap"] = worst;
    std::ostringstream line;
    line << "max symbol mismatch " << worst << " under the scaling law";
    b.flag("dilation_covariance", worst <= 1e-10 * std::max(1.0, m1.max_abs()),
           line.str());
  }
}

// ---------------------------------------------------------------------
// cauchy-check: contour representation of iterated commutators.
// ---------------------------------------------------------------------
void run_cauchy_check(const ExperimentConfig& cfg, Builder& b) {
  GridSpec spec = unit_grid(jgeti(cfg.params, "n", 64));
  CurveSpec curve = curve_from_name(jgets(cfg.params, "curve", "parabola"));
  ScalarField2D braw =
      make_symbol(spec, jgets(cfg.params, "preset", "smooth-random"),
                  cfg.params.value("preset_params", json::object()), cfg.seed);
  ScalarField2D bsym = scale(braw, 1.0 / braw.max_abs());
  ScalarField2D f = preset_smooth_random(spec, cfg.seed + 1, 5, 2.0);
  MultiplierTable tab =
      build_multiplier(curve, spec, QuadratureSpec::defaults(spec));
  OperatorHandle H = make_fourier_op(tab);

  struct Case {
    int k;
    int M;
    double tol;
  };
  std::ostringstream csv;
  csv << "order,contour_points,rel_l2_error\n";
  csv.precision(17);
  for (Case c : {Case{1, 32, 1e-6}, Case{2, 64, 1e-5}, Case{3, 96, 1e-4}}) {
    Timer t;
    ScalarField2D direct = c.k == 1 ? commutator_apply(bsym, H, f)
                                    : higher_commutator_apply(bsym, H, f, c.k);
    ScalarField2D via =
        contour_commutator(bsym, H, f, c.k, ContourSpec{1.0, c.M});
    double err = rel_l2(via, direct);
    csv << c.k << "," << c.M << "," << err << "\n";
    b.results["contour_err_k" + std::to_string(c.k)] = err;
    b.timings["k" + std::to_string(c.k) + "_ms"] = t.ms();
    std::ostringstream line;
    line << "order " << c.k << " contour (" << c.M << " points) error " << err
         << " <= " << c.tol;
    b.flag("contour_k" + std::to_string(c.k), err <= c.tol, line.str());
  }
  b.artifacts.emplace_back("contour_errors.csv", csv.str());

  // Constant symbols commute: the contour result must vanish.
  {
    ScalarField2D bconst(spec, 0.7);
    ScalarField2D z = contour_commutator(bconst, H, f, 1, ContourSpec{1.0, 32});
    double nz = lp_norm(z, 2.0) / lp_norm(f, 2.0);
    b.results["constant_symbol_residual"] = nz;
    std::ostringstream line;
    line << "relative residual " << nz;
    b.flag("constant_symbol_zero", nz <= 1e-9, line.str());
  }
}

// ---------------------------------------------------------------------
// chain: testing norm <= C1 * commutator norm <= C1*C2 * oscillation.
// ---------------------------------------------------------------------
struct ChainRow {
  std::string name;
  double bmo = 0.0, testing = 0.0, upper = 0.0, lower = 0.0;
};

void run_chain(const ExperimentConfig& cfg, Builder& b) {
  std::string curve_name = jgets(cfg.params, "curve", "parabola");
  CurveSpec curve = curve_from_name(curve_name);
  GridSpec spec = unit_grid(jgeti(cfg.params, "n", 64));
  int count = jgeti(cfg.params, "symbols", 20);
  double margin = jget(cfg.params, "fit_margin", 1.5);
  bool monomial = curve.kind == CurveKind::Monomial;

  // Oscillation family: anisotropic cubes matched to the curve. Deep
  // scales degenerate below the cell height, so stay coarse.
  CubeFamily fam_bmo = enumerate_family(
      spec.domain(), monomial ? 0 : 1, monomial ? 2 : 3, curve.alpha, true);
  // Testing family: cubes far enough up and right that the flow set
  // stays inside the domain.
  Rect window{0.625, monomial ? 0.3 : 0.4, 0.9375, 0.9};
  CubeFamily fam_test = subsample_family(
      enumerate_family(window, 4, 5, curve.alpha, false),
      jgeti(cfg.params, "testing_cubes_per_scale", 12));

  TestingParams tp;
  tp.quad = QuadratureSpec::defaults(spec);
  MultiplierTable tab = build_multiplier(curve, spec, tp.quad);
  OperatorHandle H = make_fourier_op(tab);

  auto suite = symbol_suite(spec, count, cfg.seed);
  std::vector<ChainRow> rows;
  Timer t_all;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& [name, sym] = suite[i];
    ChainRow row;
    row.name = name;
    row.bmo = bmo_norm(sym, fam_bmo).value;
    row.upper = operator_norm_upper(make_commutator_op(sym, H), spec, 150,
                                    1e-7, cfg.seed + 100 + i)
                    .upper;
    TestingLowerBound tlb =
        operator_norm_lower_testing(sym, H, fam_test, curve, tp);
    row.lower = tlb.value;
    for (const auto& probe : tlb.probes)
      row.testing = std::max(row.testing, probe.deviation);
    rows.push_back(row);
  }
  b.timings["suite_ms"] = t_all.ms();

  std::ostringstream csv;
  csv << "symbol,bmo,testing,norm_upper,norm_lower\n";
  csv.precision(17);
  for (const auto& r : rows)
    csv << r.name << "," << r.bmo << "," << r.testing << "," << r.upper << ","
        << r.lower << "\n";
  b.artifacts.emplace_back("chain.csv", csv.str());

  // Fit the comparability constants on the first half, validate on the
  // held-out second half; the 1.5x margin is part of the protocol.
  std::size_t half = rows.size() / 2;
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    if (rows[i].upper > 0.0) c1 = std::max(c1, rows[i].testing / rows[i].upper);
    if (rows[i].bmo > 0.0) c2 = std::max(c2, rows[i].lower / rows[i].bmo);
  }
  c1 *= margin;
  c2 *= margin;
  int violations = 0;
  bool positive = true;
  for (std::size_t i = half; i < rows.size(); ++i) {
    if (rows[i].testing > c1 * rows[i].upper) ++violations;
    if (rows[i].lower > c2 * rows[i].bmo) ++violations;
  }
  for (const auto& r : rows)
    positive = positive && r.bmo > 0.0 && r.upper > 0.0 && r.lower > 0.0;
  b.results["c1"] = c1;
  b.results["c2"] = c2;
  b.results["holdout_violations"] = violations;
  {
    std::ostringstream line;
    line << "C1 = " << c1 << ", C2 = " << c2 << ", held-out violations "
         << violations << "/" << (rows.size() - half) * 2;
    b.flag("chain_holdout", violations == 0, line.str());
    b.flag("chain_positive", positive,
           "all oscillation and norm estimates are strictly positive");
  }
}

// ---------------------------------------------------------------------
// weights: exponential A_p bound, reverse Holder, weighted norms.
// ---------------------------------------------------------------------
void run_weights(const ExperimentConfig& cfg, Builder& b) {
  GridSpec spec = unit_grid(jgeti(cfg.params, "n", 64));
  CubeFamily fam = enumerate_family(spec.domain(), 1, 3, {1.0, 2.0}, true);
  auto suite = symbol_suite(spec, jgeti(cfg.params, "symbols", 10), cfg.seed);

  std::ostringstream csv;
  csv << "symbol,p,lambda,ap,bound\n";
  csv.precision(17);
  bool ap_ok = true, rh_ok = true;
  double worst_excess = -1e300;
  Timer t;
  for (auto& [name, raw] : suite) {
    ScalarField2D g = normalize_family_bmo(raw, fam);
    for (double p : {1.5, 2.0, 3.0}) {
      double lam_max = std::min(1.0, p - 1.0);
      for (double frac : {0.5, 1.0}) {
        for (double sgn : {-1.0, 1.0}) {
          double lam = sgn * frac * lam_max;
          Weight w = exp_weight(g, lam);
          double ap = ap_characteristic(w, fam, p);
          double bound = std::pow(4.0, std::abs(lam));
          csv << name << "," << p << "," << lam << "," << ap << "," << bound
              << "\n";
          ap_ok = ap_ok && ap <= bound + 1e-6;
          worst_excess = std::max(worst_excess, ap - bound);
        }
      }
    }
    // Reverse Holder with the conservative exponent 1 + 1/(4 [w]_{A_2}).
    Weight w = exp_weight(g, 0.5);
    double ap2 = ap_characteristic(w, fam, 2.0);
    double rh = rh_characteristic(w, fam, 1.0 + 1.0 / (4.0 * ap2));
    rh_ok = rh_ok && rh <= 2.0;
  }
  b.timings["ap_ms"] = t.ms();
  b.artifacts.emplace_back("weights.csv", csv.str());
  b.results["worst_ap_excess"] = worst_excess;
  {
    std::ostringstream line;
    line << "worst [w]_{A_p} - 4^{|lambda|} = " << worst_excess
         << " (must be <= 1e-6)";
    b.flag("ap_exponential_bound", ap_ok, line.str());
    b.flag("reverse_holder", rh_ok,
           "[w]_{RH_{1+1/(4[w]_{A_2})}} <= 2 for every symbol");
  }

  // Weighted operator norms under the similarity transform, recorded per
  // lambda for the first symbol.
  {
    MultiplierTable tab =
        build_multiplier(CurveSpec::parabola(), spec, QuadratureSpec::defaults(spec));
    OperatorHandle H = make_fourier_op(tab);
    ScalarField2D g = normalize_family_bmo(suite[0].second, fam);
    json norms = json::object();
    bool finite = true;
    for (double lam : {-0.5, 0.0, 0.5}) {
      NormEstimate est =
          weighted_operator_norm(H, exp_weight(g, lam), spec, 100, 1e-6, cfg.seed);
      norms[std::to_string(lam)] = est.upper;
      finite = finite && std::isfinite(est.upper);
    }
    b.results["weighted_norms"] = norms;
    b.flag("weighted_norm_finite", finite,
           "weighted norm estimates are finite across lambda");
  }
}

// ---------------------------------------------------------------------
// sparse: domination ratios over the exponent triangle.
// ---------------------------------------------------------------------
void run_sparse(const ExperimentConfig& cfg, Builder& b) {
  GridSpec spec = unit_grid(jgeti(cfg.params, "n", 64));
  double delta = jget(cfg.params, "delta", 0.25);
  SparseCollection coll =
      generate_sparse_family(spec, spec.domain(), 1, 3, {1.0, 2.0}, delta);
  SparsityReport rep = verify_sparsity(coll);
  b.results["sparse_cubes"] = coll.cubes.size();
  b.results["worst_density"] = rep.worst_ratio;
  {
    std::ostringstream line;
    line << coll.cubes.size() << " cubes, worst claimed density "
         << rep.worst_ratio << " >= " << delta;
    b.flag("sparsity_verified", rep.ok, line.str());
  }

  ScalarField2D braw =
      make_symbol(spec, jgets(cfg.params, "preset", "smooth-random"),
                  cfg.params.value("preset_params", json::object()), cfg.seed);
  ScalarField2D bsym = scale(braw, 1.0 / braw.max_abs());
  ScalarField2D f = preset_smooth_random(spec, cfg.seed + 1, 5, 2.0);
  ScalarField2D g = preset_smooth_random(spec, cfg.seed + 2, 6, 2.0);
  MultiplierTable tab =
      build_multiplier(CurveSpec::parabola(), spec, QuadratureSpec::defaults(spec));
  OperatorHandle H = make_fourier_op(tab);
  double pairing = inner_product(commutator_apply(bsym, H, f), g);
  b.results["pairing"] = pairing;

  std::ostringstream csv;
  csv << "r,s,form,domination_ratio\n";
  csv.precision(17);
  double form11 = 0.0;
  bool monotone = true;
  for (auto [r, s] : std::vector<std::pair<double, double>>{
           {1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {1.5, 1.5}, {2.0, 2.0}}) {
    double form = sparse_form(f, g, coll, r, s);
    double ratio = domination_ratio(pairing, form);
    csv << r << "," << s << "," << form << "," << ratio << "\n";
    if (r == 1.0 && s == 1.0)
      form11 = form;
    else
      monotone = monotone && form >= form11 - 1e-12 * std::abs(form11);
  }
  b.artifacts.emplace_back("sparse.csv", csv.str());
  b.flag("form_monotone_in_exponents", monotone,
         "higher exponents give larger sparse forms (power-mean ordering)");
}

// ---------------------------------------------------------------------
// line-counterexamples: slice identity plus both separation directions.
// ---------------------------------------------------------------------
void run_line_counterexamples(const ExperimentConfig& cfg, Builder& b) {
  // Slice identity: the planar line transform acts row by row, so the
  // 2-D commutator must equal the per-row 1-D ones bit for bit.
  {
    GridSpec spec = unit_grid(64);
    ScalarField2D sym = preset_smooth_random(spec, cfg.seed, 5, 2.0);
    ScalarField2D f = preset_smooth_random(spec, cfg.seed + 1, 6, 2.0);
    ScalarField2D lhs = commutator_apply(sym, make_line_op(), f);
    double worst = 0.0;
    std::vector<double> brow(spec.nx), frow(spec.nx);
    for (int j = 0; j < spec.ny; ++j) {
      for (int i = 0; i < spec.nx; ++i) {
        brow[i] = sym.at(i, j);
        frow[i] = f.at(i, j);
      }
      std::vector<double> hf = hilbert_1d(frow);
      std::vector<double> bf(spec.nx);
      for (int i = 0; i < spec.nx; ++i) bf[i] = brow[i] * frow[i];
      std::vector<double> hbf = hilbert_1d(bf);
      for (int i = 0; i < spec.nx; ++i)
        worst = std::max(
            worst, std::abs(lhs.at(i, j) - (brow[i] * hf[i] - hbf[i])));
    }
    b.results["slice_identity_gap"] = worst;
    b.flag("slice_identity_bitexact", worst == 0.0,
           "2-D line commutator equals row-wise 1-D commutators exactly");
  }

  GridSpec spec;
  spec.nx = spec.ny = jgeti(cfg.params, "n", 256);
  spec.lx = spec.ly = 4.0;
  double mid = 2.0;
  int m_lo = 1, m_hi = 4;

  // Direction 1: a sign jump plus a vertical log^2 spike. Planar
  // oscillation keeps growing with depth; slice oscillation is capped by
  // the two-valued jump and stays at its coarse-scale value.
  {
    Timer t;
    ScalarField2D sym = preset_jump_plus_spike(spec, mid, mid, 40.0);
    CubeFamily fam =
        enumerate_family(spec.domain(), m_lo, m_hi, {1.0, 1.0}, true);
    std::vector<double> planar = cumulative_per_scale(bmo_norm(sym, fam));
    std::vector<double> slice;
    for (int m = m_lo; m <= m_hi; ++m)
      slice.push_back(slice_bmo_inf(sym, m_lo, m));
    b.timings["direction1_ms"] = t.ms();
    bool planar_up = true;
    for (std::size_t i = 1; i < planar.size(); ++i)
      planar_up = planar_up && planar[i] > planar[i - 1];
    double s_lo = *std::min_element(slice.begin(), slice.end());
    double s_hi = *std::max_element(slice.begin(), slice.end());
    b.results["d1_planar"] = planar;
    b.results["d1_slice"] = slice;
    std::ostringstream l1, l2;
    l1 << "planar estimates " << json(planar).dump();
    l2 << "slice spread " << s_hi - s_lo;
    b.flag("d1_planar_increasing", planar_up, l1.str());
    b.flag("d1_slice_constant", s_hi - s_lo <= 1e-10, l2.str());

    std::ostringstream csv;
    csv << "scale_index,planar,slice\n";
    csv.precision(17);
    for (std::size_t i = 0; i < planar.size(); ++i)
      csv << i << "," << planar[i] << "," << slice[i] << "\n";
    b.artifacts.emplace_back("direction1.csv", csv.str());
  }

  // Direction 2: a product symbol whose vertical spike deepens with the
  // truncation index. Slice oscillation grows doubly-logarithmically;
  // the planar estimate barely moves.
  {
    Timer t;
    CubeFamily fam =
        enumerate_family(spec.domain(), m_lo, m_hi, {1.0, 1.0}, true);
    std::vector<double> slice, planar;
    std::ostringstream csv;
    csv << "truncation_m,slice,planar\n";
    csv.precision(17);
    for (int mt = 8; mt <= 11; ++mt) {
      ScalarField2D sym = preset_sine_log_product(spec, mid, mt);
      slice.push_back(slice_bmo_inf(sym, m_lo, m_hi));
      planar.push_back(bmo_norm(sym, fam).value);
      csv << mt << "," << slice.back() << "," << planar.back() << "\n";
    }
    b.timings["direction2_ms"] = t.ms();
    bool slice_up = true;
    for (std::size_t i = 1; i < slice.size(); ++i)
      slice_up = slice_up && slice[i] > slice[i - 1];
    bool planar_stable = true;
    for (double v : planar)
      planar_stable =
          planar_stable && std::abs(v - planar[0]) <= 0.10 * planar[0];
    b.results["d2_slice"] = slice;
    b.results["d2_planar"] = planar;
    std::ostringstream l1, l2;
    l1 << "slice estimates " << json(slice).dump();
    l2 << "planar estimates " << json(planar).dump();
    b.flag("d2_slice_increasing", slice_up, l1.str());
    b.flag("d2_planar_stable", planar_stable, l2.str());
    b.artifacts.emplace_back("direction2.csv", csv.str());
  }
}

// ---------------------------------------------------------------------
// adjacent-cubes: |b_Q - b_R| bounded by the testing deviation of a
// sub-cube whose flow set lands inside R.
// ---------------------------------------------------------------------
void run_adjacent_cubes([[maybe_unused]] const ExperimentConfig& cfg,
                        Builder& b) {
  CurveSpec curve = CurveSpec::parabola();
  GridSpec spec;
  spec.nx = spec.ny = 128;
  spec.lx = spec.ly = 2.0;
  // Half-cell origin shift puts cell boundaries on the 1/64 lattice, so
  // cube edges align with whole cells and averages of piecewise-constant
  // symbols are exact.
  spec.origin = {0.5 * spec.dx(), 0.5 * spec.dy()};

  AnisoCube Q{{0.75, 0.75}, 0.5, {1.0, 2.0}};
  AnisoCube R{{0.25, 0.5}, 0.5, {1.0, 2.0}};
  auto sub = find_testing_subcube(Q, R, curve, spec, 8, 6);
  b.flag("testing_subcube_found", sub.has_value(),
         "a dyadic sub-cube of Q flows entirely into R");
  if (!sub) return;
  b.results["subcube_ell"] = sub->ell;
  b.results["subcube_corner"] = {sub->corner.x, sub->corner.y};

  TestingParams tp;
  tp.quad = QuadratureSpec::defaults(spec);

  std::vector<std::pair<double, double>> pairs = {
      {1.0, 0.0},  {0.0, 1.0},   {2.0, -1.0},   {-1.0, -1.0}, {0.5, 0.25},
      {3.0, 3.0},  {-2.0, 1.0},  {1.5, -0.5},   {1.25, -0.75}, {0.1, 0.9}};
  Rect qr = Q.rect(), rr = R.rect();
  std::ostringstream csv;
  csv << "c_q,c_r,avg_gap,testing_deviation,slack\n";
  csv.precision(17);
  bool ok = true;
  double worst_slack = 1e300;
  for (auto [cq, cr] : pairs) {
    ScalarField2D sym = field_from_fn(spec, [&](double x, double y) {
      if (x >= qr.x0 && x < qr.x1 && y >= qr.y0 && y < qr.y1) return cq;
      if (x >= rr.x0 && x < rr.x1 && y >= rr.y0 && y < rr.y1) return cr;
      return 0.0;
    });
    double lhs = std::abs(average_over_rect(sym, qr) -
                          average_over_rect(sym, rr));
    double rhs = testing_deviation(sym, *sub, curve, tp);
    double slack = rhs - lhs;
    worst_slack = std::min(worst_slack, slack);
    ok = ok && slack >= -1e-9;
    csv << cq << "," << cr << "," << lhs << "," << rhs << "," << slack << "\n";
  }
  b.artifacts.emplace_back("adjacent.csv", csv.str());
  b.results["worst_slack"] = worst_slack;
  std::ostringstream line;
  line << "worst slack " << worst_slack << " (must be >= -1e-9)";
  b.flag("average_gap_bounded", ok, line.str());
}

// ---------------------------------------------------------------------
// monomial: geometry + chain re-run on a (1, alpha2) curve.
// ---------------------------------------------------------------------
void run_monomial(const ExperimentConfig& cfg, Builder& b);

ExperimentReport assemble(const ExperimentConfig& cfg, Builder& b,
                          double total_ms) {
  b.timings["total_ms"] = total_ms;
  ExperimentReport rep;
  rep.summary["schema_version"] = 1;
  rep.summary["experiment"] = cfg.experiment;
  rep.summary["seed"] = cfg.seed;
  rep.summary["params"] = cfg.params;
  rep.summary["results"] = b.results;
  rep.summary["flags"] = b.flags;
  rep.summary["timings_ms"] = b.timings;
  std::ostringstream head;
  head << "experiment: " << cfg.experiment << " (seed " << cfg.seed << ")\n";
  rep.text = head.str() + b.text.str();
  rep.artifacts = std::move(b.artifacts);
  return rep;
}

void run_named(const std::string& name, const ExperimentConfig& cfg,
               Builder& b) {
  if (name == "geometry") return run_geometry(cfg, b);
  if (name == "transform-check") return run_transform_check(cfg, b);
  if (name == "cauchy-check") return run_cauchy_check(cfg, b);
  if (name == "chain") return run_chain(cfg, b);
  if (name == "weights") return run_weights(cfg, b);
  if (name == "sparse") return run_sparse(cfg, b);
  if (name == "line-counterexamples") return run_line_counterexamples(cfg, b);
  if (name == "adjacent-cubes") return run_adjacent_cubes(cfg, b);
  if (name == "monomial") return run_monomial(cfg, b);
  std::string all;
  for (const auto& n : experiment_names()) all += (all.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown experiment '" + name +
                              "'; valid: " + all);
}

void run_monomial(const ExperimentConfig& cfg, Builder& b) {
  ExperimentConfig inner = cfg;
  inner.params["curve"] = jgets(cfg.params, "curve", "monomial13");
  Builder geo;
  run_named("geometry", inner, geo);
  Builder chain;
  run_named("chain", inner, chain);
  auto merge = [&b](const std::string& prefix, Builder& src) {
    for (auto& [k, v] : src.flags.items()) b.flags[prefix + k] = v;
    for (auto& [k, v] : src.results.items()) b.results[prefix + k] = v;
    for (auto& [k, v] : src.timings.items()) b.timings[prefix + k] = v;
    b.text << src.text.str();
    for (auto& a : src.artifacts)
      b.artifacts.emplace_back(prefix + a.first, std::move(a.second));
  };
  merge("geometry_", geo);
  merge("chain_", chain);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("experiment"))
    throw std::invalid_argument("config needs an 'experiment' field");
  cfg.experiment = j.at("experiment").get<std::string>();
  cfg.params = j.value("params", json::object());
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.out_dir = j.value("out", std::string{});
  return cfg;
}

bool ExperimentReport::all_pass() const {
  if (!summary.contains("flags")) return false;
  for (const auto& [k, v] : summary.at("flags").items()) {
    (void)k;
    if (!v.get<bool>()) return false;
  }
  return true;
}

std::vector<std::string> experiment_names() {
  return {"geometry",   "transform-check", "cauchy-check",
          "chain",      "weights",         "sparse",
          "line-counterexamples", "adjacent-cubes", "monomial"};
}

std::vector<std::string> preset_names() {
  return {"smooth-random", "two-level", "log-parabolic", "jump-plus-spike",
          "sine-log-product"};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  Timer t;
  Builder b;
  run_named(cfg.experiment, cfg, b);
  ExperimentReport rep = assemble(cfg, b, t.ms());
  if (!cfg.out_dir.empty()) write_report(rep, cfg.out_dir);
  return rep;
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/summary.json", report.summary.dump(2) + "\n");
  write_text_file(dir + "/summary.txt", report.text);
  for (const auto& [name, content] : report.artifacts)
    write_text_file(dir + "/" + name, content);
}

}  // namespace curvelab
