#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riccikit/chart.hpp"
#include "riccikit/expr.hpp"
#include "riccikit/linalg.hpp"

namespace rk {

// Scalar / vector fields given componentwise as expressions in the chart
// coordinates.
struct ScalarField {
  Chart chart;
  Expr f;
};

struct VectorField {
  Chart chart;
  std::vector<Expr> components;  // contravariant, one per coordinate
};

// Semi-Riemannian metric on a single chart.  Components are expressions; the
// declared signature is a string of '+'/'-' (e.g. "-+++") giving the expected
// eigenvalue sign pattern, ascending position = coordinate order is NOT
// implied, only the multiset of signs is checked.
struct MetricField {
  Chart chart;
  std::vector<Expr> components;  // dim*dim, row-major, symmetric
  std::string signature;

  int dim() const { return chart.dim(); }
  const Expr& at(int i, int j) const { return components[static_cast<std::size_t>(i) * dim() + j]; }
};

// Smooth map between charts, target coordinates as expressions in source
// coordinates.
struct SmoothMap {
  Chart source;
  Chart target;
  std::vector<Expr> components;  // target.dim() expressions
};

// Metric value at a point, with exact first/second derivatives of every
// component (from jet evaluation), the inverse, and the determinant.
struct MetricEval {
  Matrix g;
  Matrix g_inv;
  double det = 0.0;
  std::vector<Jet2> jets;  // dim*dim, row-major

  const Jet2& jet(int i, int j) const { return jets[static_cast<std::size_t>(i) * g.rows() + j]; }
  // First derivative d_k g_ij.
  double dg(int k, int i, int j) const { return jet(i, j).grad[k]; }
  // Second derivative d_k d_l g_ij.
  double ddg(int k, int l, int i, int j) const { return jet(i, j).h(k, l); }
};

// --- registry of built-in geometries ------------------------------------

// Known curvature facts for a built-in, used by report generation to decide
// which reference checks apply.
struct BuiltinTraits {
  bool flat = false;        // whole Riemann tensor vanishes
  bool ricci_flat = false;  // Ricci vanishes (implied by flat)
  std::optional<double> constant_scalar;  // scalar curvature everywhere
};

// Names: minkowski2/3/4, hyperbolic_polar2, cone3, schwarzschild,
// euclidean<N> for N in 2..9, sphere3.  The "builtin:" prefix is accepted
// and stripped.  Throws rk::config_error for unknown names.
MetricField builtin_metric(const std::string& name);
BuiltinTraits builtin_traits(const std::string& name);
bool is_builtin_metric(const std::string& name);
std::vector<std::string> builtin_metric_names();

// --- operations -----------------------------------------------------------

// Evaluate g at p: matrix, inverse, det and component jets.  Throws
// rk::domain_error outside the chart domain and rk::degenerate_metric_error
// when |det g| <= 1e-12 * scale^dim (scale = max |g_ij|, floored at 1).
MetricEval eval_metric(const MetricField& g, const Point& p);

// Multiply every component by e^{2 sigma}, as expressions.  The conformal
// metric lives on the same chart with the same signature.
MetricField conformal_rescale(const MetricField& g, const ScalarField& sigma);

// Multiply every component by an arbitrary positive factor expression.
MetricField scale_components(const MetricField& g, const Expr& factor);

// Pullback (phi^* g)_ij(x) = g_ab(phi(x)) J^a_i J^b_j with the exact Jacobian
// from jets.  Result is the covariant component matrix at x.
Matrix pullback_metric(const SmoothMap& phi, const MetricField& g, const Point& x);

// Pullback of a pointwise covariant 2-tensor given at phi(x).
Matrix pullback_tensor(const SmoothMap& phi, const Matrix& t_at_phi_x, const Point& x);

// Evaluate the map (and its Jacobian on request).
Point apply_map(const SmoothMap& phi, const Point& x);
Matrix map_jacobian(const SmoothMap& phi, const Point& x);  // target.dim x source.dim

// outer(inner(x)), composed symbolically by substitution.
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

// Evaluate a vector field's components (values only) at p.
Vec eval_vector(const VectorField& v, const Point& p);

// Sampled structural validation: component symmetry, invertibility and the
// declared signature (eigenvalue sign pattern) at n sampled points.
struct MetricValidation {
  int samples = 0;
  double max_asymmetry = 0.0;
  int signature_mismatches = 0;
  bool ok = false;
};
MetricValidation validate_metric(const MetricField& g, Sampler& sampler, int samples);

}  // namespace rk
