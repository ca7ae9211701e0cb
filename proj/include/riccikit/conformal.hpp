#pragma once

#include <optional>

#include "riccikit/curvature.hpp"
#include "riccikit/metric.hpp"

namespace rk {

// A metric together with the vector field A describing a conformally related
// connection: for rescaled metrics e^{2 sigma} g, A = grad_g sigma and its
// one-form is alpha = d sigma.  The pair may carry A componentwise, sigma,
// or both; with sigma alone A is derived pointwise as g^{-1} d sigma.
struct ConformalPair {
  MetricField g;
  std::optional<VectorField> a;
  std::optional<ScalarField> sigma;

  int dim() const { return g.dim(); }
};

ConformalPair make_conformal_pair(MetricField g, VectorField a);
ConformalPair make_conformal_pair(MetricField g, ScalarField sigma);
ConformalPair make_conformal_pair(MetricField g, VectorField a, ScalarField sigma);

// Value of A at p (contravariant components).
Vec conformal_vector_at(const ConformalPair& pair, const Point& p);

// One-form alpha_j = <A, e_j> and its coordinate derivatives d_i alpha_j at p.
// When sigma is present this is the sigma jet (alpha = d sigma, so the
// derivative matrix is sigma's Hessian); otherwise it is assembled from the
// jets of g and A by the product rule.
struct OneFormJet {
  Vec alpha;       // alpha_j
  Matrix dalpha;   // d_i alpha_j, derivative index first
};
OneFormJet conformal_one_form(const ConformalPair& pair, const Point& p);

// When both A and sigma are present: max_k |A^k - (g^{-1} d sigma)^k| at p.
double gradient_consistency(const ConformalPair& pair, const Point& p);

// Difference tensor of the conformally related connection:
//   D(X, Y) = <A,X> Y + <A,Y> X - <X,Y> A   (pointwise in X, Y).
Vec connection_difference(const ConformalPair& pair, std::span<const double> x_dir,
                          std::span<const double> y_dir, const Point& p);

// Residual max over coordinate directions and `random_dirs` extra sampled
// pairs (X,Y) of | (Gamma[e^{2 sigma} g] - Gamma[g])(X,Y) - D(X,Y) |.
// Requires sigma (the rescaled metric is built symbolically).
double conformal_connection_check(const ConformalPair& pair, const Point& p, Sampler& sampler,
                                  int random_dirs = 10);

// Q = nabla alpha - alpha (x) alpha, covariant, derivative index first:
//   Q_ij = d_i alpha_j - Gamma^k_ij alpha_k - alpha_i alpha_j.
Tensor2 q_tensor(const ConformalPair& pair, const Point& p);

// q = trace of tilde(Q).
double q_trace(const ConformalPair& pair, const Point& p);

// Predicted difference of Ricci tensors between the conformal connection and
// the base one:
//   E = (2 - m) Q - { q + (m - 1) <A,A> } g.
// Dimension m >= 3 required.
Tensor2 ricci_difference_prediction(const ConformalPair& pair, const Point& p);

// Residuals of the full identity chain at p.  `prediction_vs_direct` compares
// the algebraic prediction E above against ricci(e^{2 sigma} g) - ricci(g)
// computed by the curvature module on the symbolically rescaled metric (two
// independent paths); the rest are internal-consistency residuals:
//   trace_chain : tr(tilde E) - [(2 - 2m) q - (m-1) m <A,A>]
//   main        : -E/(m-2) + tr(tilde E) g / (2 (m-2)(m-1)) - Q - <A,A>/2 g
//   q_back      : recover q from tr(tilde E) and <A,A>
//   big_q_back  : recover Q from E, q and <A,A>
struct IdentityResiduals {
  double prediction_vs_direct = 0.0;
  double main = 0.0;
  double trace_chain = 0.0;
  double q_back = 0.0;
  double big_q_back = 0.0;
  double max() const;
};
IdentityResiduals verify_main_identity(const ConformalPair& pair, const Point& p);

// Pure linear algebra variant used to test the transcription of the identity
// chain itself: given arbitrary symmetric Q, metric matrix g (invertible) and
// a value of <A,A>, build E by the prediction formula and evaluate the main
// identity and trace chain.  No geometry involved.
struct AlgebraicCheck {
  double main = 0.0;
  double trace_chain = 0.0;
};
AlgebraicCheck algebraic_identity_check(const Matrix& g, const Matrix& q_comp, double a_norm2);

}  // namespace rk
