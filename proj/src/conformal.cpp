#include "riccikit/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "riccikit/errors.hpp"

namespace rk {

namespace {

void check_same_chart(const ConformalPair& pair) {
  if (pair.a && pair.a->chart.id != pair.g.chart.id)
    throw config_error("conformal pair: field A lives on a different chart than g");
  if (pair.sigma && pair.sigma->chart.id != pair.g.chart.id)
    throw config_error("conformal pair: sigma lives on a different chart than g");
}

}  // namespace

ConformalPair make_conformal_pair(MetricField g, VectorField a) {
  ConformalPair p{std::move(g), std::move(a), std::nullopt};
  check_same_chart(p);
  return p;
}

ConformalPair make_conformal_pair(MetricField g, ScalarField sigma) {
  ConformalPair p{std::move(g), std::nullopt, std::move(sigma)};
  check_same_chart(p);
  return p;
}

ConformalPair make_conformal_pair(MetricField g, VectorField a, ScalarField sigma) {
  ConformalPair p{std::move(g), std::move(a), std::move(sigma)};
  check_same_chart(p);
  return p;
}

Vec conformal_vector_at(const ConformalPair& pair, const Point& p) {
  if (pair.a) return eval_vector(*pair.a, p);
  if (!pair.sigma) throw precondition_error("conformal pair carries neither A nor sigma");
  const MetricEval ev = eval_metric(pair.g, p);
  const Jet2 sj = eval_jet(pair.sigma->f, p.x);
  return mat_vec(ev.g_inv, sj.grad);
}

OneFormJet conformal_one_form(const ConformalPair& pair, const Point& p) {
  const int n = pair.dim();
  OneFormJet out;
  if (pair.sigma) {
    const Jet2 sj = eval_jet(pair.sigma->f, p.x);
    out.alpha = sj.grad;
    out.dalpha = Matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.dalpha(i, j) = sj.h(i, j);
    return out;
  }
  if (!pair.a) throw precondition_error("conformal pair carries neither A nor sigma");
  // alpha_j = g_jk A^k; d_i alpha_j = (d_i g_jk) A^k + g_jk d_i A^k.
  const MetricEval ev = eval_metric(pair.g, p);
  std::vector<Jet2> aj;
  aj.reserve(n);
  for (const Expr& c : pair.a->components) aj.push_back(eval_jet(c, p.x));
  out.alpha.assign(n, 0.0);
  out.dalpha = Matrix(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      out.alpha[j] += ev.g(j, k) * aj[k].value;
      for (int i = 0; i < n; ++i)
        out.dalpha(i, j) += ev.dg(i, j, k) * aj[k].value + ev.g(j, k) * aj[k].grad[i];
    }
  return out;
}

double gradient_consistency(const ConformalPair& pair, const Point& p) {
  if (!pair.a || !pair.sigma)
    throw precondition_error("gradient consistency needs both A and sigma");
  const MetricEval ev = eval_metric(pair.g, p);
  const Jet2 sj = eval_jet(pair.sigma->f, p.x);
  const Vec grad_sigma = mat_vec(ev.g_inv, sj.grad);
  const Vec a = eval_vector(*pair.a, p);
  return max_abs_diff(a, grad_sigma);
}

Vec connection_difference(const ConformalPair& pair, std::span<const double> x_dir,
                          std::span<const double> y_dir, const Point& p) {
  const int n = pair.dim();
  const MetricEval ev = eval_metric(pair.g, p);
  const Vec a = conformal_vector_at(pair, p);
  const double ax = bilinear(ev.g, a, x_dir);
  const double ay = bilinear(ev.g, a, y_dir);
  const double xy = bilinear(ev.g, x_dir, y_dir);
  Vec out(n);
  for (int k = 0; k < n; ++k) out[k] = ax * y_dir[k] + ay * x_dir[k] - xy * a[k];
  return out;
}

double conformal_connection_check(const ConformalPair& pair, const Point& p, Sampler& sampler,
                                  int random_dirs) {
  if (!pair.sigma)
    throw precondition_error("connection check requires the pair to carry sigma");
  const int n = pair.dim();
  const MetricField rescaled = conformal_rescale(pair.g, *pair.sigma);
  const ChristoffelData base = christoffel(pair.g, p);
  const ChristoffelData conf = christoffel(rescaled, p);

  // The connection difference is tensorial, so (Gamma' - Gamma) contracted
  // with any X, Y must reproduce D(X,Y); check coordinate directions plus a
  // few random ones.
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  for (int r = 0; r < random_dirs; ++r) {
    Vec d(n);
    for (int i = 0; i < n; ++i) d[i] = sampler.uniform(-1.0, 1.0);
    dirs.push_back(d);
  }

  double residual = 0.0;
  for (const Vec& x_dir : dirs)
    for (const Vec& y_dir : dirs) {
      const Vec want = connection_difference(pair, x_dir, y_dir, p);
      for (int k = 0; k < n; ++k) {
        double got = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            got += (conf.gamma(k, i, j) - base.gamma(k, i, j)) * x_dir[i] * y_dir[j];
        residual = std::max(residual, std::abs(got - want[k]));
      }
    }
  return residual;
}

Tensor2 q_tensor(const ConformalPair& pair, const Point& p) {
  const int n = pair.dim();
  const MetricEval ev = eval_metric(pair.g, p);
  const ChristoffelData ch = christoffel(ev);
  const OneFormJet of = conformal_one_form(pair, p);
  Tensor2 out;
  out.variance = Variance::covariant;
  out.comps = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double cov = of.dalpha(i, j);
      for (int k = 0; k < n; ++k) cov -= ch.gamma(k, i, j) * of.alpha[k];
      out.comps(i, j) = cov - of.alpha[i] * of.alpha[j];
    }
  return out;
}

double q_trace(const ConformalPair& pair, const Point& p) {
  const MetricEval ev = eval_metric(pair.g, p);
  return trace_mixed(tilde(q_tensor(pair, p), ev.g_inv));
}

Tensor2 ricci_difference_prediction(const ConformalPair& pair, const Point& p) {
  const int m = pair.dim();
  if (m < 3)
    throw precondition_error("Ricci difference prediction requires dimension at least 3");
  const MetricEval ev = eval_metric(pair.g, p);
  const Tensor2 q = q_tensor(pair, p);
  const double qt = trace_mixed(tilde(q, ev.g_inv));
  const Vec a = conformal_vector_at(pair, p);
  const double a2 = bilinear(ev.g, a, a);
  Tensor2 out;
  out.variance = Variance::covariant;
  out.comps = q.comps.scaled(2.0 - m) - ev.g.scaled(qt + (m - 1) * a2);
  return out;
}

double IdentityResiduals::max() const {
  return std::max({prediction_vs_direct, main, trace_chain, q_back, big_q_back});
}

IdentityResiduals verify_main_identity(const ConformalPair& pair, const Point& p) {
  const int m = pair.dim();
  if (m < 3) throw precondition_error("identity chain requires dimension at least 3");
  if (!pair.sigma)
    throw precondition_error("two-path verification requires the pair to carry sigma");

  const MetricEval ev = eval_metric(pair.g, p);
  const Tensor2 q = q_tensor(pair, p);
  const double qt = trace_mixed(tilde(q, ev.g_inv));
  const Vec a = conformal_vector_at(pair, p);
  const double a2 = bilinear(ev.g, a, a);

  const Tensor2 e_pred = ricci_difference_prediction(pair, p);

  // Direct path: curvature of the symbolically rescaled metric.
  const MetricField rescaled = conformal_rescale(pair.g, *pair.sigma);
  const Matrix e_direct = ricci(rescaled, p).comps - ricci(pair.g, p).comps;

  IdentityResiduals out;
  out.prediction_vs_direct = max_abs_diff(e_pred.comps, e_direct);

  const double tr_e = trace_mixed(tilde(e_pred, ev.g_inv));

  // tr(tilde E) = (2 - 2m) q - (m - 1) m <A,A>
  out.trace_chain = std::abs(tr_e - ((2.0 - 2.0 * m) * qt - (m - 1.0) * m * a2));

  // -E/(m-2) + tr(tilde E) g / (2 (m-2)(m-1)) = Q + <A,A>/2 g
  const Matrix lhs =
      e_pred.comps.scaled(-1.0 / (m - 2.0)) + ev.g.scaled(tr_e / (2.0 * (m - 2.0) * (m - 1.0)));
  const Matrix rhs = q.comps + ev.g.scaled(0.5 * a2);
  out.main = max_abs_diff(lhs, rhs);

  // Solve the trace chain back for q.
  const double q_solved = (tr_e + (m - 1.0) * m * a2) / (2.0 - 2.0 * m);
  out.q_back = std::abs(q_solved - qt);

  // Solve the prediction formula back for Q.
  const Matrix q_solved_m =
      (e_pred.comps + ev.g.scaled(qt + (m - 1.0) * a2)).scaled(1.0 / (2.0 - m));
  out.big_q_back = max_abs_diff(q_solved_m, q.comps);

  return out;
}

AlgebraicCheck algebraic_identity_check(const Matrix& g, const Matrix& q_comp, double a_norm2) {
  const int m = g.rows();
  if (m < 3) throw precondition_error("identity chain requires dimension at least 3");
  const Matrix g_inv = inverse(g);
  double qt = 0.0;
  {
    const Matrix qm = g_inv * q_comp;
    for (int i = 0; i < m; ++i) qt += qm(i, i);
  }
  const Matrix e = q_comp.scaled(2.0 - m) - g.scaled(qt + (m - 1.0) * a_norm2);
  double tr_e = 0.0;
  {
    const Matrix em = g_inv * e;
    for (int i = 0; i < m; ++i) tr_e += em(i, i);
  }
  AlgebraicCheck out;
  out.trace_chain = std::abs(tr_e - ((2.0 - 2.0 * m) * qt - (m - 1.0) * m * a_norm2));
  const Matrix lhs = e.scaled(-1.0 / (m - 2.0)) + g.scaled(tr_e / (2.0 * (m - 2.0) * (m - 1.0)));
  const Matrix rhs = q_comp + g.scaled(0.5 * a_norm2);
  out.main = max_abs_diff(lhs, rhs);
  return out;
}

}  // namespace rk
