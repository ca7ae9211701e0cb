#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "riccikit/chart.hpp"
#include "riccikit/errors.hpp"
#include "riccikit/metric.hpp"

using namespace rk;

namespace {

const double kPi = std::acos(-1.0);

MetricField polar_euclidean2() {
  MetricField g;
  g.chart.id = "polar2";
  g.chart.coords = {"rho", "theta"};
  g.chart.domain = [](std::span<const double> x) { return x[0] > 0.0; };
  g.chart.sample_box = {{0.3, 3.0}, {-3.0, 3.0}};
  g.signature = "++";
  const auto& vars = g.chart.coords;
  g.components = {parse_expression("1", vars), parse_expression("0", vars),
                  parse_expression("0", vars), parse_expression("rho^2", vars)};
  return g;
}

}  // namespace

TEST_CASE("builtin registry") {
  const auto names = builtin_metric_names();
  for (const char* expected : {"minkowski2", "minkowski3", "minkowski4", "hyperbolic_polar2",
                               "cone3", "schwarzschild", "sphere3"})
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());

  CHECK(is_builtin_metric("cone3"));
  CHECK(is_builtin_metric("builtin:cone3"));
  CHECK(is_builtin_metric("euclidean5"));
  CHECK(!is_builtin_metric("nosuch"));
  CHECK_THROWS_AS((void)builtin_metric("nosuch"), config_error);
  CHECK_THROWS_AS((void)builtin_metric("euclidean1"), config_error);
  CHECK_THROWS_AS((void)builtin_metric("euclidean10"), config_error);

  // The prefixed and bare forms give the same geometry.
  const MetricField a = builtin_metric("cone3");
  const MetricField b = builtin_metric("builtin:cone3");
  CHECK(a.chart.id == b.chart.id);
  CHECK(a.signature == b.signature);
}

TEST_CASE("builtin component values at reference points") {
  {
    const MetricField g = builtin_metric("minkowski3");
    const MetricEval ev = eval_metric(g, {"minkowski3", {0.3, -1.2, 0.8}});
    CHECK(max_abs_diff(ev.g, Matrix::diag(std::vector<double>{-1.0, 1.0, 1.0})) == 0.0);
    CHECK(ev.det == doctest::Approx(-1.0).epsilon(1e-15));
  }
  {
    const MetricField g = builtin_metric("hyperbolic_polar2");
    const MetricEval ev = eval_metric(g, {"hyperbolic_polar2", {2.0, 0.5}});
    CHECK(ev.g(0, 0) == 1.0);
    CHECK(ev.g(1, 1) == -4.0);
    CHECK(ev.g(0, 1) == 0.0);
    CHECK(ev.det == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(ev.g_inv(1, 1) == doctest::Approx(-0.25).epsilon(1e-15));
    // Exact component derivatives from the jets:
    CHECK(ev.dg(0, 1, 1) == doctest::Approx(-4.0).epsilon(1e-15));   // d_rho g_theta_theta = -2 rho
    CHECK(ev.ddg(0, 0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(ev.dg(1, 1, 1) == 0.0);
  }
  {
    const MetricField g = builtin_metric("cone3");
    const double u = 0.7;
    const MetricEval ev = eval_metric(g, {"cone3", {2.0, u, -1.0}});
    CHECK(ev.g(0, 0) == 1.0);
    CHECK(ev.g(1, 1) == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(ev.g(2, 2) == doctest::Approx(-4.0 * std::sinh(u) * std::sinh(u)).epsilon(1e-15));
  }
  {
    const MetricField g = builtin_metric("schwarzschild");
    const double th = 1.1;
    const MetricEval ev = eval_metric(g, {"schwarzschild", {0.0, 4.0, th, 0.3}});
    CHECK(ev.g(0, 0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(ev.g(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ev.g(2, 2) == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(ev.g(3, 3) == doctest::Approx(16.0 * std::sin(th) * std::sin(th)).epsilon(1e-15));
  }
  {
    const MetricField g = builtin_metric("sphere3");
    const double chi = 0.9, th = 1.3;
    const MetricEval ev = eval_metric(g, {"sphere3", {chi, th, 2.2}});
    const double s2 = std::sin(chi) * std::sin(chi);
    CHECK(ev.g(1, 1) == doctest::Approx(s2).epsilon(1e-15));
    CHECK(ev.g(2, 2) == doctest::Approx(s2 * std::sin(th) * std::sin(th)).epsilon(1e-15));
  }
  {
    const MetricField g = builtin_metric("euclidean3");
    const MetricEval ev = eval_metric(g, {"euclidean3", {0.1, 0.2, 0.3}});
    CHECK(max_abs_diff(ev.g, Matrix::identity(3)) == 0.0);
  }
}

TEST_CASE("negative squares in component strings parse as intended") {
  // Under the grammar, unary minus binds tighter than '^': the builtin
  // sources must spell -(rho^2), and the value must be negative.
  const MetricField g = builtin_metric("hyperbolic_polar2");
  const MetricEval ev = eval_metric(g, {"hyperbolic_polar2", {3.0, 0.0}});
  CHECK(ev.g(1, 1) == -9.0);  // would be +9 if written -rho^2
}

TEST_CASE("domain enforcement") {
  const MetricField schw = builtin_metric("schwarzschild");
  CHECK_THROWS_AS((void)eval_metric(schw, {"schwarzschild", {0.0, 1.5, 1.0, 0.0}}), domain_error);
  CHECK_THROWS_AS((void)eval_metric(schw, {"schwarzschild", {0.0, 2.0, 1.0, 0.0}}), domain_error);

  const MetricField hyp = builtin_metric("hyperbolic_polar2");
  CHECK_THROWS_AS((void)eval_metric(hyp, {"hyperbolic_polar2", {-1.0, 0.0}}), domain_error);

  const MetricField cone = builtin_metric("cone3");
  CHECK_THROWS_AS((void)eval_metric(cone, {"cone3", {1.0, -0.5, 0.0}}), domain_error);

  CHECK(hyp.chart.contains(std::vector<double>{1.0, 0.0}));
  CHECK(!hyp.chart.contains(std::vector<double>{-1.0, 0.0}));
}

TEST_CASE("degenerate metric detection") {
  MetricField g;
  g.chart.id = "shrink";
  g.chart.coords = {"x", "y"};
  g.chart.sample_box = {{-1.0, 1.0}, {-1.0, 1.0}};
  g.signature = "++";
  const auto& vars = g.chart.coords;
  g.components = {parse_expression("1e-10", vars), parse_expression("0", vars),
                  parse_expression("0", vars), parse_expression("1e-10", vars)};
  CHECK_THROWS_AS((void)eval_metric(g, {"shrink", {0.0, 0.0}}), degenerate_metric_error);
}

TEST_CASE("conformal rescale multiplies components by exp(2 sigma)") {
  const MetricField g = builtin_metric("hyperbolic_polar2");
  ScalarField sigma{g.chart, parse_expression("-2*log(rho)", g.chart.coords)};
  const MetricField resc = conformal_rescale(g, sigma);
  CHECK(resc.chart.id == g.chart.id);
  CHECK(resc.signature == g.signature);

  // e^{2 sigma} = rho^-4: at rho = 2 the rescaled metric is diag(1/16, -1/4).
  const MetricEval ev = eval_metric(resc, {"hyperbolic_polar2", {2.0, 0.7}});
  CHECK(ev.g(0, 0) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(ev.g(1, 1) == doctest::Approx(-0.25).epsilon(1e-14));

  // scale_components with the equivalent explicit factor agrees.
  const MetricField scaled = scale_components(g, parse_expression("rho^(-4)", g.chart.coords));
  const MetricEval ev2 = eval_metric(scaled, {"hyperbolic_polar2", {2.0, 0.7}});
  CHECK(max_abs_diff(ev.g, ev2.g) < 1e-15);
}

TEST_CASE("pullback under the radial inversion of the flat polar plane") {
  const MetricField g = builtin_metric("hyperbolic_polar2");
  SmoothMap inv;
  inv.source = g.chart;
  inv.target = g.chart;
  inv.components = {parse_expression("1/rho", g.chart.coords),
                    parse_expression("theta", g.chart.coords)};

  // (inv^* g) at (2, 0.5): diag(1/16, -1/4) — equal to rho^-4 g there.
  const Point p{"hyperbolic_polar2", {2.0, 0.5}};
  const Matrix pulled = pullback_metric(inv, g, p);
  CHECK(pulled(0, 0) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(pulled(1, 1) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(std::abs(pulled(0, 1)) < 1e-16);

  // Functoriality: inv o inv = identity, so the double pullback returns g.
  const SmoothMap twice = compose(inv, inv);
  Sampler sampler(5);
  for (int rep = 0; rep < 30; ++rep) {
    const Point q = sampler.sample(g.chart);
    const Matrix round = pullback_metric(twice, g, q);
    const Matrix direct = eval_metric(g, q).g;
    CHECK(max_abs_diff(round, direct) < 1e-10);
  }

  // apply_map on the composition is the identity map pointwise.
  const Point back = apply_map(twice, p);
  CHECK(back.x[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(back.x[1] == 0.5);
}

TEST_CASE("pullback of the Cartesian plane through polar coordinates") {
  const MetricField cart = builtin_metric("euclidean2");
  const MetricField polar = polar_euclidean2();

  SmoothMap to_cart;
  to_cart.source = polar.chart;
  to_cart.target = cart.chart;
  to_cart.components = {parse_expression("rho*cos(theta)", polar.chart.coords),
                        parse_expression("rho*sin(theta)", polar.chart.coords)};

  Sampler sampler(11);
  for (int rep = 0; rep < 30; ++rep) {
    const Point p = sampler.sample(polar.chart);
    const Matrix pulled = pullback_metric(to_cart, cart, p);
    const Matrix expected = eval_metric(polar, p).g;  // diag(1, rho^2)
    CHECK(max_abs_diff(pulled, expected) < 1e-13);
  }

  const Point p{"polar2", {2.0, kPi / 6.0}};
  const Matrix jac = map_jacobian(to_cart, p);
  CHECK(jac.rows() == 2);
  CHECK(jac.cols() == 2);
  CHECK(jac(0, 0) == doctest::Approx(std::cos(kPi / 6.0)).epsilon(1e-15));
  CHECK(jac(0, 1) == doctest::Approx(-2.0 * std::sin(kPi / 6.0)).epsilon(1e-15));
  CHECK(jac(1, 0) == doctest::Approx(std::sin(kPi / 6.0)).epsilon(1e-15));
  CHECK(jac(1, 1) == doctest::Approx(2.0 * std::cos(kPi / 6.0)).epsilon(1e-15));
}

TEST_CASE("vector field evaluation") {
  const MetricField g = builtin_metric("hyperbolic_polar2");
  VectorField a{g.chart,
                {parse_expression("-(2/rho)", g.chart.coords),
                 parse_expression("0", g.chart.coords)}};
  const Vec v = eval_vector(a, {"hyperbolic_polar2", {4.0, 1.0}});
  CHECK(v[0] == -0.5);
  CHECK(v[1] == 0.0);
}

TEST_CASE("sampler determinism and bounds") {
  const MetricField g = builtin_metric("cone3");

  Sampler s1(42), s2(42), s3(43);
  const auto pts1 = s1.sample_many(g.chart, 50);
  const auto pts2 = s2.sample_many(g.chart, 50);
  REQUIRE(pts1.size() == 50);
  bool identical = true, differs_from_other_seed = false;
  Sampler s3b(43);
  const auto pts3 = s3b.sample_many(g.chart, 50);
  for (std::size_t i = 0; i < pts1.size(); ++i) {
    for (int d = 0; d < 3; ++d) {
      if (pts1[i].x[d] != pts2[i].x[d]) identical = false;
      if (pts1[i].x[d] != pts3[i].x[d]) differs_from_other_seed = true;
    }
  }
  CHECK(identical);
  CHECK(differs_from_other_seed);

  // Every sample respects the (margin-shrunk) box and the chart domain.
  for (const Point& p : pts1) {
    CHECK(p.chart_id == "cone3");
    for (int d = 0; d < 3; ++d) {
      const auto [lo, hi] = g.chart.sample_box[d];
      const double margin = kBoundaryMargin * (hi - lo);
      CHECK(p.x[d] >= lo + margin * 0.999);
      CHECK(p.x[d] <= hi - margin * 0.999);
    }
    CHECK(g.chart.contains(p.x));
  }

  // unit() stays in [0,1), uniform(lo,hi) in [lo,hi).
  Sampler u(7);
  for (int i = 0; i < 1000; ++i) {
    const double r = u.unit();
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
    const double v = u.uniform(-3.0, -1.0);
    CHECK(v >= -3.0);
    CHECK(v < -1.0);
  }
}

TEST_CASE("sampling a box that misses the domain throws after rejection") {
  Chart c;
  c.id = "empty";
  c.coords = {"x"};
  c.domain = [](std::span<const double> x) { return x[0] > 10.0; };
  c.sample_box = {{0.0, 1.0}};
  Sampler s(1);
  CHECK_THROWS_AS((void)s.sample(c), domain_error);
}

TEST_CASE("box override narrows sampling") {
  const MetricField g = builtin_metric("minkowski2");
  Sampler s(3);
  const std::vector<std::array<double, 2>> narrow = {{1.0, 1.1}, {0.0, 0.1}};
  const auto pts = s.sample_many(g.chart, 20, narrow);
  for (const Point& p : pts) {
    CHECK(p.x[0] >= 1.0);
    CHECK(p.x[0] <= 1.1);
    CHECK(p.x[1] >= 0.0);
    CHECK(p.x[1] <= 0.1);
  }
}

TEST_CASE("structural validation of every builtin") {
  for (const std::string& name : builtin_metric_names()) {
    CAPTURE(name);
    const MetricField g = builtin_metric(name);
    Sampler sampler(42);
    const MetricValidation v = validate_metric(g, sampler, 200);
    CHECK(v.ok);
    CHECK(v.samples == 200);
    CHECK(v.max_asymmetry == 0.0);
    CHECK(v.signature_mismatches == 0);
  }
}
