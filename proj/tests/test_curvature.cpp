#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "riccikit/chart.hpp"
#include "riccikit/curvature.hpp"
#include "riccikit/errors.hpp"
#include "riccikit/metric.hpp"

using namespace rk;

namespace {

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

double riemann_max(const MetricField& g, const Point& p) {
  const RiemannTensor r = riemann(g, p);
  double worst = 0.0;
  for (double v : r.comps.data) worst = std::max(worst, std::abs(v));
  return worst;
}

// First Bianchi identity: the cyclic sum over the three lower slots.
double bianchi_first_max(const RiemannTensor& r) {
  double worst = 0.0;
  const int n = r.dim;
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          worst = std::max(worst, std::abs(r.comps(d, c, a, b) + r.comps(d, a, b, c) +
                                           r.comps(d, b, c, a)));
  return worst;
}

// Metric compatibility: d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il.
double compatibility_max(const MetricField& g, const Point& p) {
  const MetricEval ev = eval_metric(g, p);
  const ChristoffelData ch = christoffel(ev);
  const int n = ev.g.rows();
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double resid = ev.dg(k, i, j);
        for (int l = 0; l < n; ++l)
          resid -= ch.gamma(l, k, i) * ev.g(l, j) + ch.gamma(l, k, j) * ev.g(i, l);
        worst = std::max(worst, std::abs(resid));
      }
  return worst;
}

}  // namespace

TEST_CASE("Christoffel symbols of the flat polar plane with a timelike angle") {
  const MetricField g = builtin_metric("hyperbolic_polar2");
  const Point p{"hyperbolic_polar2", {2.0, 0.3}};
  const ChristoffelData ch = christoffel(g, p);

  // ds^2 = d rho^2 - rho^2 d theta^2:
  //   Gamma^rho_theta_theta = rho,   Gamma^theta_rho_theta = 1/rho.
  CHECK(ch.gamma(0, 1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ch.gamma(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ch.gamma(1, 1, 0) == ch.gamma(1, 0, 1));  // symmetric lower pair
  CHECK(std::abs(ch.gamma(0, 0, 0)) < 1e-15);

  // Exact derivative of the coefficients: d_rho Gamma^theta_rho_theta = -1/rho^2.
  CHECK(ch.dgamma(0, 1, 0, 1) == doctest::Approx(-0.25).epsilon(1e-13));
  CHECK(ch.dgamma(0, 0, 1, 1) == doctest::Approx(1.0).epsilon(1e-13));  // d_rho (rho)
}

TEST_CASE("Christoffel symbols of the ordinary polar plane") {
  const MetricField g = polar_euclidean2();
  const ChristoffelData ch = christoffel(g, {"polar2", {1.0, 0.7}});
  CHECK(ch.gamma(0, 1, 1) == doctest::Approx(-1.0).epsilon(1e-14));  // -rho
  CHECK(ch.gamma(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));   // 1/rho
}

TEST_CASE("flat geometries have vanishing curvature") {
  for (const char* name : {"minkowski2", "minkowski3", "minkowski4", "euclidean3",
                           "hyperbolic_polar2", "cone3"}) {
    CAPTURE(name);
    const MetricField g = builtin_metric(name);
    Sampler sampler(17);
    for (const Point& p : sampler.sample_many(g.chart, 40)) {
      CHECK(riemann_max(g, p) < 1e-10);
      Tensor2 ric = ricci(g, p);
      CHECK(ric.comps.max_abs() < 1e-10);
      CHECK(std::abs(scalar_curvature(g, p)) < 1e-10);
    }
  }
}

TEST_CASE("unit 3-sphere: constant-curvature pattern, Ricci = 2g, Sc = 6") {
  const MetricField g = builtin_metric("sphere3");
  Sampler sampler(23);
  for (const Point& p : sampler.sample_many(g.chart, 40)) {
    const MetricEval ev = eval_metric(g, p);
    const RiemannTensor r = riemann(g, p);

    // Constant curvature +1: R(e_a, e_b) e_c = delta^d_a g_bc - delta^d_b g_ac.
    double worst = 0.0;
    for (int d = 0; d < 3; ++d)
      for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const double expected = (d == a ? ev.g(b, c) : 0.0) - (d == b ? ev.g(a, c) : 0.0);
            worst = std::max(worst, std::abs(r.comps(d, c, a, b) - expected));
          }
    CHECK(worst < 1e-11);

    const Tensor2 ric = ricci(g, p);
    CHECK(max_abs_diff(ric.comps, ev.g.scaled(2.0)) < 1e-11);
    CHECK(scalar_curvature(g, p) == doctest::Approx(6.0).epsilon(1e-11));

    // Mixed form: tilde(Ric) = 2 * identity, trace = 6.
    const Tensor2 mixed = tilde(ric, ev.g_inv);
    CHECK(max_abs_diff(mixed.comps, Matrix::identity(3).scaled(2.0)) < 1e-11);
    CHECK(trace_mixed(mixed) == doctest::Approx(6.0).epsilon(1e-11));
  }
}

TEST_CASE("Schwarzschild is Ricci-flat but not flat") {
  const MetricField g = builtin_metric("schwarzschild");
  Sampler sampler(29);
  for (const Point& p : sampler.sample_many(g.chart, 30)) {
    const RiemannTensor r = riemann(g, p);
    double riem = 0.0;
    for (double v : r.comps.data) riem = std::max(riem, std::abs(v));
    CHECK(riem > 1e-6);  // genuinely curved

    const Tensor2 ric = ricci_from_riemann(r);
    CHECK(ric.comps.max_abs() / (1.0 + riem) < 1e-11);
    CHECK(std::abs(scalar_curvature(g, p)) / (1.0 + riem) < 1e-11);
  }

  // A known value: R(e_t, e_r) e_t has d = r component -2/r^3 * (1 - 2/r)
  // (from Gamma^r_tt = (1 - 2/r)/r^2 and its radial derivative).
  const double r0 = 4.0;
  const RiemannTensor r = riemann(g, {"schwarzschild", {0.0, r0, 1.2, 0.5}});
  const double expected = -(1.0 - 2.0 / r0) * 2.0 / (r0 * r0 * r0);
  CHECK(r.comps(1, 0, 1, 0) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("structural identities on curved geometries") {
  for (const char* name : {"sphere3", "schwarzschild"}) {
    CAPTURE(name);
    const MetricField g = builtin_metric(name);
    Sampler sampler(31);
    for (const Point& p : sampler.sample_many(g.chart, 25)) {
      const RiemannTensor r = riemann(g, p);

      // Antisymmetry in the direction pair.
      double antisym = 0.0;
      const int n = r.dim;
      for (int d = 0; d < n; ++d)
        for (int c = 0; c < n; ++c)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              antisym = std::max(antisym, std::abs(r.comps(d, c, a, b) + r.comps(d, c, b, a)));
      CHECK(antisym < 1e-11);

      CHECK(bianchi_first_max(r) < 1e-10);
      CHECK(compatibility_max(g, p) < 1e-11);

      // Ricci symmetry.
      const Tensor2 ric = ricci_from_riemann(r);
      CHECK(max_abs_diff(ric.comps, ric.comps.transposed()) /
                (1.0 + ric.comps.max_abs()) < 1e-11);
    }
  }
}

TEST_CASE("energy tensor") {
  {
    // Flat space: T = 0.
    const MetricField g = builtin_metric("minkowski3");
    const Tensor2 t = energy_tensor(g, {"minkowski3", {0.1, 0.2, 0.3}});
    CHECK(t.comps.max_abs() < 1e-14);
    CHECK(t.variance == Variance::covariant);
  }
  {
    // Unit 3-sphere: Ric - (Sc/2) g = 2g - 3g = -g; coupling rescales it.
    const MetricField g = builtin_metric("sphere3");
    const Point p{"sphere3", {1.1, 0.9, 0.4}};
    const Matrix gm = eval_metric(g, p).g;
    const Tensor2 t1 = energy_tensor(g, p, 1.0);
    CHECK(max_abs_diff(t1.comps, gm.scaled(-1.0)) < 1e-11);
    const Tensor2 t2 = energy_tensor(g, p, 2.0);
    CHECK(max_abs_diff(t2.comps, gm.scaled(-0.5)) < 1e-11);
  }
  {
    // Schwarzschild solves the vacuum equation: T = 0.
    const MetricField g = builtin_metric("schwarzschild");
    const Tensor2 t = energy_tensor(g, {"schwarzschild", {0.0, 5.0, 1.0, 0.0}});
    CHECK(t.comps.max_abs() < 1e-12);
  }
}

TEST_CASE("covariant derivative of the reference radial field") {
  // A = -2/rho d_rho on the flat polar plane with timelike angle.
  const MetricField g = builtin_metric("hyperbolic_polar2");
  const VectorField a{g.chart,
                      {parse_expression("-(2/rho)", g.chart.coords),
                       parse_expression("0", g.chart.coords)}};
  const Point p{"hyperbolic_polar2", {1.0, 0.4}};

  // nabla_{d_rho} A = (2/rho^2) d_rho = 2 d_rho at rho = 1.
  const Vec dr = covariant_derivative_vector(g, a, std::vector<double>{1.0, 0.0}, p);
  CHECK(dr[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(dr[1]) < 1e-14);

  // nabla_{d_theta} A = -2/rho * Gamma^theta_theta_rho d_theta = -2 d_theta at rho = 1.
  const Vec dt = covariant_derivative_vector(g, a, std::vector<double>{0.0, 1.0}, p);
  CHECK(std::abs(dt[0]) < 1e-14);
  CHECK(dt[1] == doctest::Approx(-2.0).epsilon(1e-13));

  // Tensoriality in the direction argument: linear combination.
  const Vec dboth = covariant_derivative_vector(g, a, std::vector<double>{0.5, -1.5}, p);
  CHECK(dboth[0] == doctest::Approx(0.5 * dr[0]).epsilon(1e-13));
  CHECK(dboth[1] == doctest::Approx(-1.5 * dt[1]).epsilon(1e-13));
}

TEST_CASE("divergence") {
  {
    // div(-2/rho d_rho) = 0 on the 2-dimensional polar plane.
    const MetricField g = builtin_metric("hyperbolic_polar2");
    const VectorField a{g.chart,
                        {parse_expression("-(2/rho)", g.chart.coords),
                         parse_expression("0", g.chart.coords)}};
    Sampler sampler(37);
    for (const Point& p : sampler.sample_many(g.chart, 25))
      CHECK(std::abs(divergence(g, a, p)) < 1e-12);
  }
  {
    // div(rho d_rho) = 2 on the ordinary polar plane: (1/rho) d_rho(rho^2).
    const MetricField g = polar_euclidean2();
    const VectorField a{g.chart,
                        {parse_expression("rho", g.chart.coords),
                         parse_expression("0", g.chart.coords)}};
    CHECK(divergence(g, a, {"polar2", {1.7, 0.2}}) == doctest::Approx(2.0).epsilon(1e-13));
  }
  {
    // Constant field on a flat chart: zero.
    const MetricField g = builtin_metric("minkowski3");
    const VectorField a{g.chart,
                        {parse_expression("1", g.chart.coords),
                         parse_expression("-2", g.chart.coords),
                         parse_expression("0.5", g.chart.coords)}};
    CHECK(std::abs(divergence(g, a, {"minkowski3", {0.0, 0.1, -0.2}})) < 1e-14);
  }
}
