#include "riccikit/jet.hpp"

#include <cassert>
#include <cmath>

#include "riccikit/errors.hpp"

namespace rk {

namespace {

// Only a true (or denormal-flushed) zero divisor is an error; tiny
// denominators are legitimate near coordinate singularities and the caller's
// domain predicates are responsible for staying clear of them.
constexpr double kZeroDivisorTol = 1e-300;

// Chain rule for a scalar function f applied to jet a:
//   value  f(v)
//   grad   f'(v) * g
//   hess   f'(v) * H + f''(v) * g g^T
Jet2 unary(const Jet2& a, double f, double df, double ddf) {
  const int n = a.dim();
  Jet2 out(n);
  out.value = f;
  for (int i = 0; i < n; ++i) out.grad[i] = df * a.grad[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.h(i, j) = df * a.h(i, j) + ddf * a.grad[i] * a.grad[j];
  return out;
}

bool is_constant(const Jet2& j) {
  for (double g : j.grad)
    if (g != 0.0) return false;
  for (double h : j.hess)
    if (h != 0.0) return false;
  return true;
}

}  // namespace

Jet2 Jet2::coordinate(int i, std::span<const double> x) {
  Jet2 j(static_cast<int>(x.size()));
  j.value = x[i];
  j.grad[i] = 1.0;
  return j;
}

Jet2 operator-(const Jet2& a) {
  Jet2 out = a;
  out.value = -out.value;
  for (double& g : out.grad) g = -g;
  for (double& h : out.hess) h = -h;
  return out;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  assert(a.dim() == b.dim());
  Jet2 out = a;
  out.value += b.value;
  for (int i = 0; i < a.dim(); ++i) out.grad[i] += b.grad[i];
  for (std::size_t i = 0; i < out.hess.size(); ++i) out.hess[i] += b.hess[i];
  return out;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  assert(a.dim() == b.dim());
  Jet2 out = a;
  out.value -= b.value;
  for (int i = 0; i < a.dim(); ++i) out.grad[i] -= b.grad[i];
  for (std::size_t i = 0; i < out.hess.size(); ++i) out.hess[i] -= b.hess[i];
  return out;
}

// d(ab) = a db + b da;  d2(ab) = a H_b + b H_a + da db^T + db da^T
Jet2 operator*(const Jet2& a, const Jet2& b) {
  assert(a.dim() == b.dim());
  const int n = a.dim();
  Jet2 out(n);
  out.value = a.value * b.value;
  for (int i = 0; i < n; ++i) out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.h(i, j) = a.h(i, j) * b.value + a.value * b.h(i, j) +
                    a.grad[i] * b.grad[j] + b.grad[i] * a.grad[j];
  return out;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (std::abs(b.value) < kZeroDivisorTol) throw domain_error("division by zero in jet arithmetic");
  // a/b = a * (1/b);  d(1/b) = -db/b^2,  d2(1/b) = -H_b/b^2 + 2 db db^T / b^3
  const double inv = 1.0 / b.value;
  return a * unary(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 operator+(const Jet2& a, double c) {
  Jet2 out = a;
  out.value += c;
  return out;
}
Jet2 operator+(double c, const Jet2& a) { return a + c; }
Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
Jet2 operator-(double c, const Jet2& a) { return -a + c; }

Jet2 operator*(const Jet2& a, double c) {
  Jet2 out = a;
  out.value *= c;
  for (double& g : out.grad) g *= c;
  for (double& h : out.hess) h *= c;
  return out;
}
Jet2 operator*(double c, const Jet2& a) { return a * c; }

Jet2 operator/(const Jet2& a, double c) {
  if (std::abs(c) < kZeroDivisorTol) throw domain_error("division by zero in jet arithmetic");
  return a * (1.0 / c);
}

Jet2 operator/(double c, const Jet2& a) {
  if (std::abs(a.value) < kZeroDivisorTol) throw domain_error("division by zero in jet arithmetic");
  const double inv = 1.0 / a.value;
  return unary(a, c * inv, -c * inv * inv, 2.0 * c * inv * inv * inv);
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return unary(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return unary(a, c, -s, -c);
}

Jet2 tan(const Jet2& a) {
  const double t = std::tan(a.value);
  const double dt = 1.0 + t * t;       // sec^2
  return unary(a, t, dt, 2.0 * t * dt);
}

Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return unary(a, s, c, s);
}

Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return unary(a, c, s, c);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return unary(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  if (a.value <= 0.0) throw domain_error("log of a non-positive value");
  const double inv = 1.0 / a.value;
  return unary(a, std::log(a.value), inv, -inv * inv);
}

Jet2 log_abs(const Jet2& a) {
  if (std::abs(a.value) < kZeroDivisorTol) throw domain_error("log of zero");
  const double inv = 1.0 / a.value;  // d log|x| = 1/x for either sign
  return unary(a, std::log(std::abs(a.value)), inv, -inv * inv);
}

Jet2 sqrt(const Jet2& a) {
  if (a.value < 0.0) throw domain_error("sqrt of a negative value");
  if (a.value == 0.0) throw domain_error("sqrt derivative undefined at zero");
  const double r = std::sqrt(a.value);
  return unary(a, r, 0.5 / r, -0.25 / (r * a.value));
}

Jet2 atan(const Jet2& a) {
  const double d = 1.0 + a.value * a.value;
  return unary(a, std::atan(a.value), 1.0 / d, -2.0 * a.value / (d * d));
}

Jet2 pow(const Jet2& a, double p) {
  if (p == 0.0) return Jet2::constant(a.dim(), 1.0);
  const bool integral = std::floor(p) == p && std::abs(p) < 1e15;
  if (!integral && a.value <= 0.0)
    throw domain_error("pow with non-integral exponent requires a positive base");
  if (integral && a.value == 0.0 && p < 2.0) {
    // x^1 is fine; derivatives of x^p for p<=0 blow up at 0.
    if (p == 1.0) return a;
    throw domain_error("pow derivative undefined at zero base");
  }
  const double f = std::pow(a.value, p);
  const double df = p * std::pow(a.value, p - 1.0);
  const double ddf = p * (p - 1.0) * std::pow(a.value, p - 2.0);
  return unary(a, f, df, ddf);
}

Jet2 pow(const Jet2& a, const Jet2& b) {
  if (is_constant(b)) return pow(a, b.value);
  if (a.value <= 0.0) throw domain_error("pow with variable exponent requires a positive base");
  return exp(b * log(a));
}

}  // namespace rk
