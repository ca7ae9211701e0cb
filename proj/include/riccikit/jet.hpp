#pragma once

#include <span>
#include <vector>

namespace rk {

// Second-order forward-mode jet: a value together with its exact gradient and
// Hessian with respect to `dim` independent coordinates.  Arithmetic
// propagates both derivative orders, so any composite expression evaluated on
// jets yields machine-accurate first and second partials — no finite
// differencing anywhere downstream (curvature needs exact second derivatives
// of metric components).
//
// Storage: grad has dim entries, hess is dim*dim row-major and stays
// symmetric to machine precision (every propagation rule below produces a
// symmetric Hessian term; compiled rounding may differ in the last bits
// between the two mirror entries).
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(int dim) : value(0.0), grad(dim, 0.0), hess(static_cast<std::size_t>(dim) * dim, 0.0) {}

  static Jet2 constant(int dim, double v) {
    Jet2 j(dim);
    j.value = v;
    return j;
  }

  // Lift coordinate i at the evaluation point x: value x[i], grad e_i, hess 0.
  static Jet2 coordinate(int i, std::span<const double> x);

  int dim() const { return static_cast<int>(grad.size()); }
  double& h(int i, int j) { return hess[static_cast<std::size_t>(i) * grad.size() + j]; }
  double h(int i, int j) const { return hess[static_cast<std::size_t>(i) * grad.size() + j]; }

  double value = 0.0;
  std::vector<double> grad;
  std::vector<double> hess;
};

Jet2 operator-(const Jet2& a);
Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

Jet2 operator+(const Jet2& a, double c);
Jet2 operator+(double c, const Jet2& a);
Jet2 operator-(const Jet2& a, double c);
Jet2 operator-(double c, const Jet2& a);
Jet2 operator*(const Jet2& a, double c);
Jet2 operator*(double c, const Jet2& a);
Jet2 operator/(const Jet2& a, double c);
Jet2 operator/(double c, const Jet2& a);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 atan(const Jet2& a);

// Integral exponents accept any base (including negative); non-integral
// exponents require a positive base, matching real-valued x^p.
Jet2 pow(const Jet2& a, double p);
// Variable exponent goes through exp(b*log(a)); constant-jet exponents fall
// back to the scalar overload.
Jet2 pow(const Jet2& a, const Jet2& b);

// log(|a|): same derivative rules as log(a) but defined for either sign.
// Used when recovering conformal scale functions from |<A,A>|.
Jet2 log_abs(const Jet2& a);

}  // namespace rk
