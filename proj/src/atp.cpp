#include "riccikit/atp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riccikit/errors.hpp"

namespace rk {

namespace {

// Jet of <A,A> = g_ij A^i A^j at p (value + exact first derivatives; second
// derivatives ride along unused).
Jet2 norm2_jet(const MetricField& g, const VectorField& a, const Point& p) {
  const int n = g.dim();
  std::vector<Jet2> aj;
  aj.reserve(n);
  for (const Expr& c : a.components) aj.push_back(eval_jet(c, p.x));
  Jet2 sum = Jet2::constant(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum = sum + eval_jet(g.at(i, j), p.x) * aj[i] * aj[j];
  return sum;
}

}  // namespace

double atp_residual(const MetricField& g, const VectorField& a, const Point& p) {
  if (a.chart.id != g.chart.id)
    throw config_error("field lives on a different chart than the metric");
  const int n = g.dim();
  const MetricEval ev = eval_metric(g, p);
  const Vec av = eval_vector(a, p);
  const double a2 = bilinear(ev.g, av, av);
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec x_dir(n, 0.0);
    x_dir[i] = 1.0;
    const Vec lhs = covariant_derivative_vector(g, a, x_dir, p);
    const double ax = bilinear(ev.g, av, x_dir);
    for (int k = 0; k < n; ++k) {
      const double rhs = ax * av[k] - 0.5 * a2 * x_dir[k];
      res = std::max(res, std::abs(lhs[k] - rhs));
    }
  }
  return res;
}

const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::spacelike: return "spacelike";
    case CausalClass::timelike: return "timelike";
    case CausalClass::null_like: return "null";
    case CausalClass::zero: return "zero";
  }
  return "?";
}

CausalClass causal_character(const MetricField& g, const VectorField& a, const Point& p,
                             double tol) {
  const MetricEval ev = eval_metric(g, p);
  const Vec av = eval_vector(a, p);
  const double comp_scale = std::max(max_abs(av), 1.0);
  if (tol < 0.0) tol = 1e-9 * comp_scale * comp_scale;
  const double a2 = bilinear(ev.g, av, av);
  if (std::abs(a2) <= tol) {
    if (max_abs(av) <= std::sqrt(tol)) return CausalClass::zero;
    return CausalClass::null_like;
  }
  return a2 > 0.0 ? CausalClass::spacelike : CausalClass::timelike;
}

ConstancyScan constancy_scan(const MetricField& g, const VectorField& a,
                             std::span<const Point> pts, double residual_tol) {
  ConstancyScan out;
  out.samples = static_cast<int>(pts.size());
  for (const Point& p : pts) {
    const double r = atp_residual(g, a, p);
    out.max_residual = std::max(out.max_residual, r);
    if (r > residual_tol)
      throw precondition_error("constancy scan: field is not transport-compatible at a sample (residual " +
                               std::to_string(r) + ")");
    ++out.tally[static_cast<int>(causal_character(g, a, p))];
  }
  for (int c : out.tally)
    if (c > 0) ++out.distinct_classes;
  return out;
}

double locally_metric_check(const MetricField& g, const VectorField& a,
                            std::span<const Point> pts) {
  const int n = g.dim();
  double res = 0.0;
  for (const Point& p : pts) {
    // d alpha needs only coordinate derivatives: the connection terms of a
    // covariant curl cancel by symmetry of Gamma.
    const MetricEval ev = eval_metric(g, p);
    std::vector<Jet2> aj;
    aj.reserve(n);
    for (const Expr& c : a.components) aj.push_back(eval_jet(c, p.x));
    Matrix dalpha(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = 0.0;
        for (int k = 0; k < n; ++k)
          d += ev.dg(i, j, k) * aj[k].value + ev.g(j, k) * aj[k].grad[i];
        dalpha(i, j) = d;
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        res = std::max(res, std::abs(dalpha(i, j) - dalpha(j, i)));
  }
  return res;
}

double field_norm2(const MetricField& g, const VectorField& a, const Point& p) {
  const MetricEval ev = eval_metric(g, p);
  const Vec av = eval_vector(a, p);
  return bilinear(ev.g, av, av);
}

double recover_sigma(const MetricField& g, const VectorField& a, const Point& p) {
  const double a2 = field_norm2(g, a, p);
  if (std::abs(a2) < 1e-14)
    throw precondition_error("cannot recover a scale function from a null or vanishing field");
  return std::log(std::abs(a2));
}

double recovered_sigma_gradient_residual(const MetricField& g, const VectorField& a,
                                         const Point& p) {
  const double a2 = field_norm2(g, a, p);
  if (std::abs(a2) < 1e-14)
    throw precondition_error("cannot recover a scale function from a null or vanishing field");
  const MetricEval ev = eval_metric(g, p);
  const Jet2 n2 = norm2_jet(g, a, p);
  // d sigma = d log|<A,A>| = d<A,A> / <A,A>
  Vec dsigma(g.dim());
  for (int i = 0; i < g.dim(); ++i) dsigma[i] = n2.grad[i] / a2;
  const Vec grad = mat_vec(ev.g_inv, dsigma);
  const Vec av = eval_vector(a, p);
  return max_abs_diff(grad, av);
}

ScalarField recovered_sigma_field(const MetricField& g, const VectorField& a, CausalClass cls) {
  if (cls != CausalClass::spacelike && cls != CausalClass::timelike)
    throw precondition_error("scale recovery needs a spacelike or timelike field");
  if (a.chart.id != g.chart.id)
    throw config_error("field lives on a different chart than the metric");
  const int n = g.dim();
  // inner = sum_ij g_ij A^i A^j as one expression tree.
  Expr inner = make_constant(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inner = make_binary(ExprOp::add, inner,
                          make_binary(ExprOp::mul, g.at(i, j),
                                      make_binary(ExprOp::mul, a.components[i], a.components[j])));
  if (cls == CausalClass::timelike) inner = make_unary(ExprOp::neg, inner);
  ScalarField out;
  out.chart = g.chart;
  out.f = make_unary(ExprOp::log, inner);
  return out;
}

ObstructionResiduals obstruction_check(const MetricField& g, const VectorField& a,
                                       const Point& p) {
  const int n = g.dim();
  const RiemannTensor r = riemann(g, p);
  const Tensor2 ric = ricci_from_riemann(r);
  const Vec av = eval_vector(a, p);
  ObstructionResiduals out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int d = 0; d < n; ++d) {
        double w = 0.0;
        for (int c = 0; c < n; ++c) w += r.comps(d, c, i, j) * av[c];
        out.curvature = std::max(out.curvature, std::abs(w));
      }
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += ric.comps(i, j) * av[j];
    out.ricci = std::max(out.ricci, std::abs(s));
  }
  return out;
}

double ricci_smallest_abs_eigenvalue(const MetricField& g, const Point& p) {
  const Tensor2 ric = ricci(g, p);
  double smallest = std::numeric_limits<double>::infinity();
  for (double e : symmetric_eigenvalues(ric.comps)) smallest = std::min(smallest, std::abs(e));
  return smallest;
}

}  // namespace rk
