#include "riccikit/curvature.hpp"

#include <cmath>

#include "riccikit/errors.hpp"

namespace rk {

ChristoffelData christoffel(const MetricEval& ev) {
  const int n = ev.g.rows();
  ChristoffelData out;
  out.dim = n;
  out.gamma = Tensor3(n);
  out.dgamma = Tensor4(n);

  // Koszul: Gamma^k_ij = g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) / 2.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ev.g_inv(k, l) * (ev.dg(i, j, l) + ev.dg(j, i, l) - ev.dg(l, i, j));
        out.gamma(k, i, j) = 0.5 * s;
        out.gamma(k, j, i) = 0.5 * s;
      }

  // d_l g^{kp} = -g^{ka} (d_l g_ab) g^{bp}
  std::vector<Matrix> dginv(n);
  for (int l = 0; l < n; ++l) {
    Matrix dg_l(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg_l(a, b) = ev.dg(l, a, b);
    dginv[l] = (ev.g_inv * dg_l * ev.g_inv).scaled(-1.0);
  }

  // Differentiate Koszul: the g^{-1} factor and the metric first derivatives
  // both depend on position; the bracket's derivative needs second
  // derivatives of g, which the jets carry exactly.
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int p = 0; p < n; ++p) {
            const double bracket = ev.dg(i, j, p) + ev.dg(j, i, p) - ev.dg(p, i, j);
            const double dbracket =
                ev.ddg(i, l, j, p) + ev.ddg(j, l, i, p) - ev.ddg(p, l, i, j);
            s += dginv[l](k, p) * bracket + ev.g_inv(k, p) * dbracket;
          }
          out.dgamma(l, k, i, j) = 0.5 * s;
          out.dgamma(l, k, j, i) = 0.5 * s;
        }
  return out;
}

ChristoffelData christoffel(const MetricField& g, const Point& p) {
  return christoffel(eval_metric(g, p));
}

RiemannTensor riemann(const ChristoffelData& ch) {
  const int n = ch.dim;
  RiemannTensor out;
  out.dim = n;
  out.comps = Tensor4(n);
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = ch.dgamma(a, d, b, c) - ch.dgamma(b, d, a, c);
          for (int e = 0; e < n; ++e)
            s += ch.gamma(d, a, e) * ch.gamma(e, b, c) - ch.gamma(d, b, e) * ch.gamma(e, a, c);
          out.comps(d, c, a, b) = s;
        }
  return out;
}

RiemannTensor riemann(const MetricField& g, const Point& p) {
  return riemann(christoffel(g, p));
}

Tensor2 ricci_from_riemann(const RiemannTensor& r) {
  const int n = r.dim;
  Tensor2 out;
  out.variance = Variance::covariant;
  out.comps = Matrix(n, n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += r.comps(b, c, b, a);  // (R(e_b, e_a) e_c)^b
      out.comps(a, c) = s;
    }
  return out;
}

Tensor2 ricci(const MetricField& g, const Point& p) {
  return ricci_from_riemann(riemann(g, p));
}

double scalar_curvature(const MetricField& g, const Point& p) {
  const MetricEval ev = eval_metric(g, p);
  const Tensor2 ric = ricci_from_riemann(riemann(christoffel(ev)));
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a)
    for (int c = 0; c < g.dim(); ++c) s += ev.g_inv(a, c) * ric.comps(a, c);
  return s;
}

Tensor2 energy_tensor(const MetricField& g, const Point& p, double four_pi_g) {
  if (four_pi_g <= 0.0) throw precondition_error("coupling constant must be positive");
  const MetricEval ev = eval_metric(g, p);
  const Tensor2 ric = ricci_from_riemann(riemann(christoffel(ev)));
  double sc = 0.0;
  for (int a = 0; a < g.dim(); ++a)
    for (int c = 0; c < g.dim(); ++c) sc += ev.g_inv(a, c) * ric.comps(a, c);
  Tensor2 out;
  out.variance = Variance::covariant;
  out.comps = (ric.comps - ev.g.scaled(0.5 * sc)).scaled(1.0 / four_pi_g);
  return out;
}

Tensor2 tilde(const Tensor2& t, const Matrix& g_inv) {
  if (t.variance != Variance::covariant)
    throw precondition_error("tilde expects a covariant 2-tensor");
  Tensor2 out;
  out.variance = Variance::mixed;
  out.comps = g_inv * t.comps;
  return out;
}

double trace_mixed(const Tensor2& t) {
  if (t.variance != Variance::mixed) throw precondition_error("trace expects a mixed 2-tensor");
  double s = 0.0;
  for (int i = 0; i < t.comps.rows(); ++i) s += t.comps(i, i);
  return s;
}

Vec covariant_derivative_vector(const MetricField& g, const VectorField& v,
                                std::span<const double> x_dir, const Point& p) {
  if (v.chart.id != g.chart.id)
    throw config_error("vector field lives on a different chart than the metric");
  const int n = g.dim();
  const ChristoffelData ch = christoffel(g, p);
  // Component values and first derivatives of V at p.
  std::vector<Jet2> vj;
  vj.reserve(n);
  for (const Expr& c : v.components) vj.push_back(eval_jet(c, p.x));
  Vec out(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double s = vj[k].grad[i];
      for (int j = 0; j < n; ++j) s += ch.gamma(k, i, j) * vj[j].value;
      out[k] += x_dir[i] * s;
    }
  return out;
}

double divergence(const MetricField& g, const VectorField& v, const Point& p) {
  if (v.chart.id != g.chart.id)
    throw config_error("vector field lives on a different chart than the metric");
  const int n = g.dim();
  const MetricEval ev = eval_metric(g, p);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const Jet2 vi = eval_jet(v.components[i], p.x);
    // (1/sqrt|det|) d_i sqrt|det| = tr(g^{-1} d_i g) / 2
    double tr = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) tr += ev.g_inv(a, b) * ev.dg(i, b, a);
    s += vi.grad[i] + vi.value * 0.5 * tr;
  }
  return s;
}

}  // namespace rk
