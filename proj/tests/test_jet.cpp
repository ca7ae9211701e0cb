#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "riccikit/chart.hpp"
#include "riccikit/errors.hpp"
#include "riccikit/expr.hpp"
#include "riccikit/jet.hpp"
#include "riccikit/linalg.hpp"

using namespace rk;

namespace {

Jet2 var(int i, double v0, double v1) {
  const double x[2] = {v0, v1};
  return Jet2::coordinate(i, x);
}

// Central finite differences of eval(), the independent oracle for jets.
double fd_grad(const Expr& e, std::vector<double> x, int i, double h) {
  x[i] += h;
  const double up = eval(e, x);
  x[i] -= 2 * h;
  const double dn = eval(e, x);
  return (up - dn) / (2 * h);
}

double fd_hess(const Expr& e, std::vector<double> x, int i, int j, double h) {
  if (i == j) {
    const double mid = eval(e, x);
    x[i] += h;
    const double up = eval(e, x);
    x[i] -= 2 * h;
    const double dn = eval(e, x);
    return (up - 2 * mid + dn) / (h * h);
  }
  auto at = [&](double di, double dj) {
    std::vector<double> y = x;
    y[i] += di;
    y[j] += dj;
    return eval(e, y);
  };
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
}

}  // namespace

TEST_CASE("frozen first and second derivatives of reference expressions") {
  const std::vector<std::string> vars = {"rho"};

  {
    Jet2 j = eval_jet(parse_expression("rho^2", vars), std::vector<double>{3.0});
    CHECK(j.value == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(j.grad[0] == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(j.h(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  }
  {
    Jet2 j = eval_jet(parse_expression("1/rho", vars), std::vector<double>{2.0});
    CHECK(j.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(j.grad[0] == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(j.h(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  }
  {
    // exp(-4 log rho) = rho^-4: value 1/16, d/drho -4 rho^-5, d2 20 rho^-6.
    Jet2 j = eval_jet(parse_expression("exp(2*(-2)*log(rho))", vars), std::vector<double>{2.0});
    CHECK(j.value == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(j.grad[0] == doctest::Approx(-0.125).epsilon(1e-14));
    CHECK(j.h(0, 0) == doctest::Approx(0.3125).epsilon(1e-14));
  }
  {
    Jet2 j = eval_jet(parse_expression("sinh(rho)", vars), std::vector<double>{0.0});
    CHECK(j.value == 0.0);
    CHECK(j.grad[0] == 1.0);
    CHECK(j.h(0, 0) == 0.0);
  }
}

TEST_CASE("variable exponent jet: x^y at (2,3)") {
  Jet2 j = eval_jet(parse_expression("x^y", {"x", "y"}), std::vector<double>{2.0, 3.0});
  const double l2 = std::log(2.0);
  CHECK(j.value == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(j.grad[0] == doctest::Approx(12.0).epsilon(1e-14));          // y x^(y-1)
  CHECK(j.grad[1] == doctest::Approx(8.0 * l2).epsilon(1e-14));      // x^y ln x
  CHECK(j.h(0, 1) == doctest::Approx(4.0 + 12.0 * l2).epsilon(1e-13));
  CHECK(j.h(1, 0) == j.h(0, 1));
  CHECK(j.h(0, 0) == doctest::Approx(12.0).epsilon(1e-13));          // y(y-1) x^(y-2)
  CHECK(j.h(1, 1) == doctest::Approx(8.0 * l2 * l2).epsilon(1e-13)); // x^y (ln x)^2
}

TEST_CASE("dyadic polynomials are exact, not approximate") {
  // All coefficients and points dyadic: the jet arithmetic must be bit-exact.
  const Expr e = parse_expression("0.5*x^2 + 0.25*x*y - 2*y^2 + 3*x - 0.75", {"x", "y"});
  const std::vector<double> x = {1.5, -2.25};
  Jet2 j = eval_jet(e, x);
  CHECK(j.value == 0.5 * x[0] * x[0] + 0.25 * x[0] * x[1] - 2 * x[1] * x[1] + 3 * x[0] - 0.75);
  CHECK(j.grad[0] == x[0] + 0.25 * x[1] + 3.0);
  CHECK(j.grad[1] == 0.25 * x[0] - 4.0 * x[1]);
  CHECK(j.h(0, 0) == 1.0);
  CHECK(j.h(0, 1) == 0.25);
  CHECK(j.h(1, 0) == 0.25);
  CHECK(j.h(1, 1) == -4.0);
}

TEST_CASE("finite-difference oracle over composite expressions at seeded points") {
  const std::vector<std::string> vars = {"x", "y"};
  const std::vector<std::string> exprs = {
      "sin(x)*cos(y) + x^3",
      "exp(x/4)*log(y+3)",
      "sqrt(x^2 + y^2 + 1)",
      "tan(x/3) + atan(y)",
      "sinh(x/2)*cosh(y/2)",
      "(x + y)^3 / (1 + x^2)",
      "x^y",
      "1/(x^2 + 2) - y/(y^2 + 1)",
      "log(exp(x) + exp(y))",
      "cos(x*y/4)^2",
      "x^2*y^3 - 4*x*y + 7",
      "sqrt(exp(x/5) + y^2 + 2)",
  };

  Sampler sampler(20240817);
  int cases = 0;
  double worst_grad = 0.0, worst_hess = 0.0, worst_sym = 0.0;
  for (const std::string& src : exprs) {
    const Expr e = parse_expression(src, vars);
    for (int rep = 0; rep < 25; ++rep) {
      const std::vector<double> x = {sampler.uniform(0.4, 1.9), sampler.uniform(0.4, 1.9)};
      const Jet2 j = eval_jet(e, x);
      REQUIRE(std::isfinite(j.value));
      CHECK(j.value == doctest::Approx(eval(e, x)).epsilon(1e-14));
      const double scale_g = 1.0 + max_abs(j.grad);
      for (int i = 0; i < 2; ++i) {
        const double fd = fd_grad(e, x, i, 1e-6);
        worst_grad = std::max(worst_grad, std::abs(j.grad[i] - fd) / scale_g);
      }
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
          const double fd = fd_hess(e, x, i, k, 1e-4);
          worst_hess = std::max(worst_hess, std::abs(j.h(i, k) - fd) / (1.0 + std::abs(fd)));
          worst_sym = std::max(worst_sym, std::abs(j.h(i, k) - j.h(k, i)));
        }
      ++cases;
    }
  }
  CHECK(cases == 300);
  CHECK(worst_grad < 1e-8);   // central differences: O(h^2) = 1e-12 truncation + roundoff
  CHECK(worst_hess < 1e-5);   // second differences at h = 1e-4 carry ~1e-7 noise
  // The propagation rules are symmetric term by term; compiled rounding (FMA
  // contraction differing between the two mirror entries) can leave a couple
  // of ulps of asymmetry.
  CHECK(worst_sym < 1e-13);
}

TEST_CASE("jet arithmetic identities") {
  const Jet2 x = var(0, 1.7, -0.6);
  const Jet2 y = var(1, 1.7, -0.6);

  // (x+y)*(x-y) == x^2 - y^2, bitwise on every slot after symmetric rounding.
  const Jet2 lhs = (x + y) * (x - y);
  const Jet2 rhs = x * x - y * y;
  CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-15));
  for (int i = 0; i < 2; ++i) CHECK(lhs.grad[i] == doctest::Approx(rhs.grad[i]).epsilon(1e-15));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(lhs.h(i, j) == doctest::Approx(rhs.h(i, j)).epsilon(1e-15));

  // exp(log(x)) == x for positive x.
  const Jet2 roundtrip = exp(log(x));
  CHECK(roundtrip.value == doctest::Approx(x.value).epsilon(1e-14));
  CHECK(roundtrip.grad[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(roundtrip.h(0, 0) == doctest::Approx(0.0).epsilon(1e-14));

  // sin^2 + cos^2 == 1 with zero derivatives.
  const Jet2 pyth = sin(x) * sin(x) + cos(x) * cos(x);
  CHECK(pyth.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(pyth.grad[0]) < 1e-15);
  CHECK(std::abs(pyth.h(0, 0)) < 1e-15);
}

TEST_CASE("log_abs matches log on positives and extends to negatives") {
  const Jet2 xp = var(0, 2.0, 0.0);
  const Jet2 a = log_abs(xp);
  const Jet2 b = log(xp);
  CHECK(a.value == b.value);
  CHECK(a.grad[0] == b.grad[0]);
  CHECK(a.h(0, 0) == b.h(0, 0));

  const Jet2 xn = var(0, -2.0, 0.0);
  const Jet2 c = log_abs(xn);
  CHECK(c.value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(c.grad[0] == doctest::Approx(-0.5).epsilon(1e-15));   // d/dx log|x| = 1/x
  CHECK(c.h(0, 0) == doctest::Approx(-0.25).epsilon(1e-15));  // -1/x^2
}

TEST_CASE("pow domain rules") {
  const Jet2 xn = var(0, -2.0, 0.0);
  // Integral exponents accept negative bases...
  CHECK(pow(xn, 3.0).value == doctest::Approx(-8.0).epsilon(1e-15));
  CHECK(pow(xn, 2.0).grad[0] == doctest::Approx(-4.0).epsilon(1e-15));
  // ...non-integral exponents do not.
  CHECK_THROWS_AS((void)pow(xn, 0.5), domain_error);

  const Jet2 zero = var(0, 0.0, 0.0);
  CHECK_THROWS_AS((void)log(zero), domain_error);
  CHECK_THROWS_AS((void)(1.0 / zero), domain_error);
  CHECK_THROWS_AS((void)sqrt(var(0, -1.0, 0.0)), domain_error);
}
