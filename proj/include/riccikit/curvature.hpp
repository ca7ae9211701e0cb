#pragma once

#include "riccikit/linalg.hpp"
#include "riccikit/metric.hpp"

namespace rk {

// Rank-3 / rank-4 component holders with explicit index helpers; all indices
// run over the chart dimension.
struct Tensor3 {
  Tensor3() = default;
  explicit Tensor3(int n) : n(n), data(static_cast<std::size_t>(n) * n * n, 0.0) {}
  double& operator()(int a, int b, int c) { return data[(static_cast<std::size_t>(a) * n + b) * n + c]; }
  double operator()(int a, int b, int c) const { return data[(static_cast<std::size_t>(a) * n + b) * n + c]; }
  int n = 0;
  std::vector<double> data;
};

struct Tensor4 {
  Tensor4() = default;
  explicit Tensor4(int n) : n(n), data(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  double& operator()(int a, int b, int c, int d) {
    return data[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return data[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  }
  int n = 0;
  std::vector<double> data;
};

enum class Variance { covariant, mixed, contravariant };

// Componentwise 2-tensor at a point, tagged with its variance.  For mixed
// tensors the row index is the raised one: T^i_j = comps(i, j).
struct Tensor2 {
  Matrix comps;
  Variance variance = Variance::covariant;
};

// Levi-Civita connection coefficients and their exact first derivatives at a
// point.  gamma(k,i,j) = Gamma^k_ij (symmetric in i,j); dgamma(l,k,i,j) =
// d_l Gamma^k_ij.  Derivatives come from the metric jets (second derivatives
// of g), not from differencing.
struct ChristoffelData {
  int dim = 0;
  Tensor3 gamma;
  Tensor4 dgamma;
};

ChristoffelData christoffel(const MetricEval& ev);
ChristoffelData christoffel(const MetricField& g, const Point& p);

// Curvature operator components in the layout
//   R(e_a, e_b) e_c = comps(d, c, a, b) e_d,
// computed as d_a Gamma^d_bc - d_b Gamma^d_ac + Gamma^d_ae Gamma^e_bc
//                                             - Gamma^d_be Gamma^e_ac.
struct RiemannTensor {
  int dim = 0;
  Tensor4 comps;  // (d, c, a, b)
};

RiemannTensor riemann(const MetricField& g, const Point& p);
RiemannTensor riemann(const ChristoffelData& ch);

// Ricci tensor Ric_ac = sum_b (R(e_b, e_a) e_c)^b: the trace over the first
// curvature slot.  With this contraction the unit round sphere has positive
// Ricci (unit 3-sphere: Ric = 2 g, Sc = 6) and the conformal-difference
// identities verified by the conformal module hold with their displayed
// signs.  Result is symmetric for a Levi-Civita connection.
Tensor2 ricci(const MetricField& g, const Point& p);
Tensor2 ricci_from_riemann(const RiemannTensor& r);

double scalar_curvature(const MetricField& g, const Point& p);

// Einstein-equation combination T = (Ric - Sc/2 g) / four_pi_g, covariant.
Tensor2 energy_tensor(const MetricField& g, const Point& p, double four_pi_g = 1.0);

// Raise the first index: (tilde T)^i_j = g^{ik} T_kj.
Tensor2 tilde(const Tensor2& t, const Matrix& g_inv);
double trace_mixed(const Tensor2& t);

// (nabla_X V)^k = X^i (d_i V^k + Gamma^k_ij V^j) at p; X is a coordinate
// vector at p (the covariant derivative is tensorial in X).
Vec covariant_derivative_vector(const MetricField& g, const VectorField& v, std::span<const double> x_dir,
                                const Point& p);

// div V = (1/sqrt|det g|) d_i (sqrt|det g| V^i), evaluated via
// d_i sqrt|det g| = sqrt|det g| * tr(g^{-1} d_i g) / 2.
double divergence(const MetricField& g, const VectorField& v, const Point& p);

}  // namespace rk
