#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "riccikit/chart.hpp"
#include "riccikit/errors.hpp"
#include "riccikit/expr.hpp"

using namespace rk;

namespace {

double ev(const std::string& src, std::vector<double> x = {},
          std::vector<std::string> vars = {}) {
  return eval(parse_expression(src, vars), x);
}

}  // namespace

TEST_CASE("operator precedence and associativity") {
  CHECK(ev("1+2*3^2") == 19.0);
  CHECK(ev("2^3^2") == 512.0);          // '^' is right-associative
  CHECK(ev("8/4/2") == 1.0);            // '/' is left-associative
  CHECK(ev("7-4-2") == 1.0);
  CHECK(ev("2*3+4*5") == 26.0);
  CHECK(ev("(1+2)*3") == 9.0);
}

TEST_CASE("unary minus binds tighter than '^'") {
  // The grammar puts '-' inside `base`, so -2^2 is (-2)^2, not -(2^2).
  CHECK(ev("-2^2") == 4.0);
  CHECK(ev("-(2^2)") == -4.0);
  CHECK(ev("0-2^2") == -4.0);           // binary minus keeps normal precedence
  CHECK(ev("2*-3") == -6.0);
  CHECK(ev("--2") == 2.0);
  CHECK(ev("2^-1") == 0.5);             // exponent position also allows '-'

  // Consequence for metric components: a negative square must be written
  // with explicit parentheses.
  CHECK(ev("-rho^2", {3.0}, {"rho"}) == 9.0);
  CHECK(ev("-(rho^2)", {3.0}, {"rho"}) == -9.0);
}

TEST_CASE("variables, functions, whitespace") {
  CHECK(ev("rho*theta", {2.0, 5.0}, {"rho", "theta"}) == 10.0);
  CHECK(ev("  1   +  2 ") == 3.0);
  CHECK(ev("sin(0)") == 0.0);
  CHECK(ev("cos(0)") == 1.0);
  CHECK(ev("sqrt(49)") == 7.0);
  CHECK(ev("exp(log(5))") == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(ev("atan(1)") == doctest::Approx(std::atan(1.0)).epsilon(1e-16));
  CHECK(ev("sinh(1) - (exp(1) - exp(-1))/2") == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ev("sin(x)^2 + cos(x)^2", {0.731}, {"x"}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("numeric literals") {
  CHECK(ev("0.25") == 0.25);
  CHECK(ev("1e3") == 1000.0);
  CHECK(ev("2.5e-2") == 0.025);
  CHECK(ev("1E+2") == 100.0);
}

TEST_CASE("parse errors carry the byte offset of the offending token") {
  auto offset_of = [](const std::string& src) -> std::size_t {
    try {
      parse_expression(src, {"x", "y"});
    } catch (const parse_error& e) {
      return e.offset();
    }
    FAIL("expected parse_error for: ", src);
    return SIZE_MAX;
  };

  CHECK(offset_of("foo(x)") == 0);   // unknown identifier
  CHECK(offset_of("(1+2") == 4);     // expected ')'
  CHECK(offset_of("1 + ") == 4);     // unexpected end of input
  CHECK(offset_of("2 @ 3") == 2);    // unexpected trailing input
  CHECK(offset_of("1..5") == 2);
  CHECK(offset_of("sin") == 3);      // function name without '('

  CHECK_THROWS_AS((void)parse_expression("", {}), parse_error);
  CHECK_THROWS_AS((void)parse_expression("z + 1", {"x", "y"}), parse_error);
  CHECK_THROWS_AS((void)parse_expression("sin(x", {"x"}), parse_error);
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS((void)ev("1/x", {0.0}, {"x"}), domain_error);
  CHECK_THROWS_AS((void)ev("log(x)", {-1.0}, {"x"}), domain_error);
  CHECK_THROWS_AS((void)ev("log(0)"), domain_error);
  CHECK_THROWS_AS((void)ev("sqrt(x)", {-4.0}, {"x"}), domain_error);
  CHECK_THROWS_AS((void)ev("x^0.5", {-4.0}, {"x"}), domain_error);
  CHECK(ev("x^2", {-4.0}, {"x"}) == 16.0);  // integral exponents stay fine
  CHECK(ev("x^(-3)", {-2.0}, {"x"}) == -0.125);
}

TEST_CASE("to_string round-trips through the parser") {
  const std::vector<std::string> vars = {"x", "y"};
  const std::vector<std::string> sources = {
      "-2^2", "x^y^2", "1/(x+3) - y*x", "sin(x)*cos(y)+sqrt(x^2+1)", "2*-3+x",
  };
  Sampler sampler(99);
  for (const std::string& src : sources) {
    const Expr e = parse_expression(src, vars);
    const Expr round = parse_expression(to_string(e, vars), vars);
    for (int rep = 0; rep < 10; ++rep) {
      const std::vector<double> x = {sampler.uniform(0.5, 2.0), sampler.uniform(0.5, 2.0)};
      CHECK(eval(e, x) == eval(round, x));  // same tree, bit-identical values
    }
  }
}

TEST_CASE("substitute composes expressions symbolically") {
  // e(x, y) = x^2 + y, with x = u + v and y = u*v.
  const Expr e = parse_expression("x^2 + y", {"x", "y"});
  const Expr xr = parse_expression("u + v", {"u", "v"});
  const Expr yr = parse_expression("u*v", {"u", "v"});
  const Expr composed = substitute(e, {xr, yr});

  Sampler sampler(7);
  for (int rep = 0; rep < 20; ++rep) {
    const double u = sampler.uniform(-2.0, 2.0), v = sampler.uniform(-2.0, 2.0);
    const std::vector<double> uv = {u, v};
    const std::vector<double> xy = {u + v, u * v};
    CHECK(eval(composed, uv) == doctest::Approx(eval(e, xy)).epsilon(1e-15));
  }
}

TEST_CASE("programmatic constructors and constant detection") {
  const Expr two = make_constant(2.0);
  const Expr x = make_variable(0);
  const Expr tree = make_binary(ExprOp::add, make_binary(ExprOp::mul, two, x),
                                make_unary(ExprOp::sin, x));
  const std::vector<double> at = {1.25};
  CHECK(eval(tree, at) == doctest::Approx(2.0 * 1.25 + std::sin(1.25)).epsilon(1e-15));

  CHECK(is_constant_expr(parse_expression("2^3 + sin(1)", {})));
  CHECK(!is_constant_expr(parse_expression("2^3 + sin(x)", {"x"})));
  CHECK(!is_constant_expr(tree));
}
