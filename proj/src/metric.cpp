#include "riccikit/metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "riccikit/errors.hpp"

namespace rk {

namespace {

MetricField diag_metric(Chart chart, const std::vector<std::string>& diag, std::string signature) {
  MetricField g;
  g.chart = std::move(chart);
  g.signature = std::move(signature);
  const int n = g.chart.dim();
  g.components.assign(static_cast<std::size_t>(n) * n, make_constant(0.0));
  for (int i = 0; i < n; ++i)
    g.components[static_cast<std::size_t>(i) * n + i] = parse_expression(diag[i], g.chart.coords);
  return g;
}

Chart boxed_chart(std::string id, std::vector<std::string> coords,
                  std::vector<std::array<double, 2>> box,
                  std::function<bool(std::span<const double>)> domain = {}) {
  Chart c;
  c.id = std::move(id);
  c.coords = std::move(coords);
  c.sample_box = std::move(box);
  c.domain = std::move(domain);
  return c;
}

MetricField make_minkowski(int n) {
  std::vector<std::string> coords;
  coords.reserve(n);
  coords.emplace_back("t");
  const char* space[] = {"x", "y", "z"};
  for (int i = 1; i < n; ++i) coords.emplace_back(space[i - 1]);
  std::vector<std::array<double, 2>> box(n, {-2.0, 2.0});
  std::vector<std::string> diag(n, "1");
  diag[0] = "-1";
  std::string sig(n, '+');
  sig[0] = '-';
  return diag_metric(boxed_chart("minkowski" + std::to_string(n), coords, box), diag, sig);
}

MetricField make_euclidean(int n) {
  std::vector<std::string> coords;
  for (int i = 0; i < n; ++i) coords.push_back("x" + std::to_string(i + 1));
  std::vector<std::array<double, 2>> box(n, {-2.0, 2.0});
  return diag_metric(boxed_chart("euclidean" + std::to_string(n), coords, box),
                     std::vector<std::string>(n, "1"), std::string(n, '+'));
}

// ds^2 = d rho^2 - rho^2 d theta^2 on rho > 0: flat polar coordinates for a
// two-dimensional metric of signature (+,-) around a spacelike axis.
MetricField make_hyperbolic_polar2() {
  Chart c = boxed_chart("hyperbolic_polar2", {"rho", "theta"}, {{{0.3, 3.0}}, {{-2.0, 2.0}}},
                        [](std::span<const double> x) { return x[0] > 0.0; });
  return diag_metric(std::move(c), {"1", "-(rho^2)"}, "+-");
}

// ds^2 = d rho^2 - rho^2 (du^2 + sinh(u)^2 dv^2) on rho > 0, u > 0: polar form
// of a flat three-dimensional metric over the hyperboloid parametrized by
// x0 = cosh u, x1 = sinh u cos v, x2 = sinh u sin v (u = 0 is a coordinate
// singularity of the (u, v) parametrization, hence excluded).
MetricField make_cone3() {
  Chart c = boxed_chart("cone3", {"rho", "u", "v"},
                        {{{0.3, 3.0}}, {{0.2, 2.0}}, {{-3.0, 3.0}}},
                        [](std::span<const double> x) { return x[0] > 0.0 && x[1] > 0.0; });
  return diag_metric(std::move(c), {"1", "-(rho^2)", "-(rho^2*sinh(u)^2)"}, "+--");
}

// Exterior Schwarzschild, mass fixed at 1 (any other mass is a homothety of
// this one), in units with the horizon at r = 2.
MetricField make_schwarzschild() {
  Chart c = boxed_chart("schwarzschild", {"t", "r", "theta", "phi"},
                        {{{-5.0, 5.0}}, {{2.1, 20.0}}, {{0.2, 2.94}}, {{-3.0, 3.0}}},
                        [](std::span<const double> x) {
                          return x[1] > 2.0 && x[2] > 0.0 && x[2] < 3.14159265358979323846;
                        });
  return diag_metric(std::move(c),
                     {"-(1 - 2/r)", "1/(1 - 2/r)", "r^2", "r^2*sin(theta)^2"}, "-+++");
}

// Unit round 3-sphere in hyperspherical coordinates.
MetricField make_sphere3() {
  Chart c = boxed_chart("sphere3", {"chi", "theta", "phi"},
                        {{{0.2, 2.94}}, {{0.2, 2.94}}, {{-3.0, 3.0}}},
                        [](std::span<const double> x) {
                          constexpr double pi = 3.14159265358979323846;
                          return x[0] > 0.0 && x[0] < pi && x[1] > 0.0 && x[1] < pi;
                        });
  return diag_metric(std::move(c), {"1", "sin(chi)^2", "sin(chi)^2*sin(theta)^2"}, "+++");
}

std::string strip_builtin_prefix(const std::string& name) {
  constexpr std::string_view prefix = "builtin:";
  if (name.rfind(prefix, 0) == 0) return name.substr(prefix.size());
  return name;
}

}  // namespace

MetricField builtin_metric(const std::string& raw_name) {
  const std::string name = strip_builtin_prefix(raw_name);
  if (name == "minkowski2") return make_minkowski(2);
  if (name == "minkowski3") return make_minkowski(3);
  if (name == "minkowski4") return make_minkowski(4);
  if (name == "hyperbolic_polar2") return make_hyperbolic_polar2();
  if (name == "cone3") return make_cone3();
  if (name == "schwarzschild") return make_schwarzschild();
  if (name == "sphere3") return make_sphere3();
  if (name.rfind("euclidean", 0) == 0) {
    const std::string suffix = name.substr(9);
    if (suffix.size() == 1 && suffix[0] >= '2' && suffix[0] <= '9')
      return make_euclidean(suffix[0] - '0');
  }
  throw config_error("unknown built-in metric '" + raw_name + "'");
}

BuiltinTraits builtin_traits(const std::string& raw_name) {
  const std::string name = strip_builtin_prefix(raw_name);
  BuiltinTraits t;
  if (name.rfind("minkowski", 0) == 0 || name.rfind("euclidean", 0) == 0 ||
      name == "hyperbolic_polar2" || name == "cone3") {
    t.flat = true;
    t.ricci_flat = true;
    t.constant_scalar = 0.0;
  } else if (name == "schwarzschild") {
    t.ricci_flat = true;
    t.constant_scalar = 0.0;
  } else if (name == "sphere3") {
    t.constant_scalar = 6.0;  // unit n-sphere: n(n-1)
  }
  return t;
}

bool is_builtin_metric(const std::string& name) {
  try {
    builtin_metric(name);
    return true;
  } catch (const config_error&) {
    return false;
  }
}

std::vector<std::string> builtin_metric_names() {
  std::vector<std::string> names = {"minkowski2",       "minkowski3", "minkowski4",
                                    "hyperbolic_polar2", "cone3",      "schwarzschild",
                                    "sphere3"};
  for (int n = 2; n <= 9; ++n) names.push_back("euclidean" + std::to_string(n));
  return names;
}

MetricEval eval_metric(const MetricField& g, const Point& p) {
  const int n = g.dim();
  if (static_cast<int>(p.x.size()) != n)
    throw config_error("point dimension does not match chart dimension");
  if (!g.chart.contains(p.x))
    throw domain_error("point outside the validity domain of chart '" + g.chart.id + "'");
  MetricEval out;
  out.g = Matrix(n, n);
  out.jets.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.jets.push_back(eval_jet(g.at(i, j), p.x));
      out.g(i, j) = out.jets.back().value;
    }
  out.det = determinant(out.g);
  const double scale = std::max(out.g.max_abs(), 1.0);
  if (std::abs(out.det) <= 1e-12 * std::pow(scale, n))
    throw degenerate_metric_error("metric degenerate at evaluation point (|det| = " +
                                  std::to_string(std::abs(out.det)) + ")");
  out.g_inv = inverse(out.g);
  return out;
}

MetricField conformal_rescale(const MetricField& g, const ScalarField& sigma) {
  if (sigma.chart.id != g.chart.id || sigma.chart.dim() != g.dim())
    throw config_error("conformal factor lives on a different chart than the metric");
  // e^{2 sigma}, shared across all components.
  Expr factor = make_unary(ExprOp::exp, make_binary(ExprOp::mul, make_constant(2.0), sigma.f));
  return scale_components(g, factor);
}

MetricField scale_components(const MetricField& g, const Expr& factor) {
  MetricField out = g;
  for (auto& c : out.components) c = make_binary(ExprOp::mul, factor, c);
  return out;
}

Point apply_map(const SmoothMap& phi, const Point& x) {
  if (!phi.source.contains(x.x)) throw domain_error("map argument outside source chart domain");
  Point y;
  y.chart_id = phi.target.id;
  y.x.reserve(phi.components.size());
  for (const Expr& c : phi.components) y.x.push_back(eval(c, x.x));
  return y;
}

Matrix map_jacobian(const SmoothMap& phi, const Point& x) {
  const int ns = phi.source.dim();
  const int nt = phi.target.dim();
  Matrix j(nt, ns);
  for (int a = 0; a < nt; ++a) {
    const Jet2 jet = eval_jet(phi.components[a], x.x);
    for (int i = 0; i < ns; ++i) j(a, i) = jet.grad[i];
  }
  return j;
}

Matrix pullback_tensor(const SmoothMap& phi, const Matrix& t_at_phi_x, const Point& x) {
  const Matrix j = map_jacobian(phi, x);
  return j.transposed() * t_at_phi_x * j;
}

Matrix pullback_metric(const SmoothMap& phi, const MetricField& g, const Point& x) {
  if (g.chart.id != phi.target.id)
    throw config_error("pullback: metric lives on a chart different from the map target");
  const Point y = apply_map(phi, x);
  const MetricEval ev = eval_metric(g, y);
  return pullback_tensor(phi, ev.g, x);
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (inner.target.id != outer.source.id)
    throw config_error("compose: inner map target differs from outer map source");
  SmoothMap out;
  out.source = inner.source;
  out.target = outer.target;
  out.components.reserve(outer.components.size());
  for (const Expr& c : outer.components) out.components.push_back(substitute(c, inner.components));
  return out;
}

Vec eval_vector(const VectorField& v, const Point& p) {
  Vec out;
  out.reserve(v.components.size());
  for (const Expr& c : v.components) out.push_back(eval(c, p.x));
  return out;
}

MetricValidation validate_metric(const MetricField& g, Sampler& sampler, int samples) {
  MetricValidation rep;
  rep.samples = samples;
  std::string want = g.signature;
  std::sort(want.begin(), want.end());
  for (int s = 0; s < samples; ++s) {
    const Point p = sampler.sample(g.chart);
    const MetricEval ev = eval_metric(g, p);  // throws on degeneracy
    for (int i = 0; i < g.dim(); ++i)
      for (int j = i + 1; j < g.dim(); ++j)
        rep.max_asymmetry = std::max(rep.max_asymmetry, std::abs(ev.g(i, j) - ev.g(j, i)));
    std::string got;
    for (double ev_i : symmetric_eigenvalues(ev.g)) got += ev_i < 0.0 ? '-' : '+';
    std::sort(got.begin(), got.end());
    if (got != want) ++rep.signature_mismatches;
  }
  rep.ok = rep.signature_mismatches == 0 && rep.max_asymmetry < 1e-10;
  return rep;
}

}  // namespace rk
