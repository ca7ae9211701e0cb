#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "riccikit/curvature.hpp"
#include "riccikit/metric.hpp"

namespace rk {

// Detector and consequence checks for vector fields satisfying the transport
// equation
//   nabla_X A = <A,X> A - <A,A>/2 X          for every X.
// Such a field is the gradient of a conformal factor whose rescaled metric
// keeps the Ricci tensor of the base metric, and its causal character is
// constant on a connected domain.

// Residual of the defining equation at p: because both sides are tensorial in
// X, coordinate directions suffice; the residual is the largest absolute
// component over all basis directions.
double atp_residual(const MetricField& g, const VectorField& a, const Point& p);

enum class CausalClass { spacelike, timelike, null_like, zero };
const char* to_string(CausalClass c);

// Classify by the sign of <A,A> at p.  |<A,A>| below `tol` counts as null,
// and a null <A,A> with all components below sqrt(tol) counts as the zero
// vector.  Default tol = 1e-9 scaled by the squared component magnitude.
CausalClass causal_character(const MetricField& g, const VectorField& a, const Point& p,
                             double tol = -1.0);

struct ConstancyScan {
  int samples = 0;
  double max_residual = 0.0;                    // transport-equation residual over samples
  std::array<int, 4> tally{{0, 0, 0, 0}};       // indexed by CausalClass
  int distinct_classes = 0;
};

// Precondition: the transport residual stays below `residual_tol` at every
// sample (throws rk::precondition_error otherwise); then tallies causal
// classes, which the theory says must not mix.
ConstancyScan constancy_scan(const MetricField& g, const VectorField& a,
                             std::span<const Point> pts, double residual_tol = 1e-6);

// max |d alpha_ij| = max |d_i alpha_j - d_j alpha_i| over the points: the
// one-form of a gradient field is closed, so this must vanish for fields that
// locally come from a scale function.
double locally_metric_check(const MetricField& g, const VectorField& a, std::span<const Point> pts);

// sigma(p) = log |<A,A>(p)|.  Throws rk::precondition_error when <A,A> is
// numerically zero (null or vanishing field).
double recover_sigma(const MetricField& g, const VectorField& a, const Point& p);

// max_k |(grad sigma)^k - A^k| at p, with grad sigma computed from the exact
// jet of <A,A> = g_ij A^i A^j.  For a transport-compatible field the
// recovered sigma generates A back.
double recovered_sigma_gradient_residual(const MetricField& g, const VectorField& a, const Point& p);

// sigma as an expression: log(s * <A,A>) with s = +1/-1 matching the field's
// causal sign, built symbolically from the component expressions so the
// rescaled metric e^{2 sigma} g can be fed back to the curvature module.
ScalarField recovered_sigma_field(const MetricField& g, const VectorField& a, CausalClass cls);

// Curvature obstructions: a transport-compatible field forces
//   R(X, Y) A = 0   and   Ric(X, A) = 0  for all X, Y.
// Returns the max absolute component of each over coordinate directions.
struct ObstructionResiduals {
  double curvature = 0.0;  // max |R(e_i, e_j) A|
  double ricci = 0.0;      // max |Ric(e_i, A)|
};
ObstructionResiduals obstruction_check(const MetricField& g, const VectorField& a, const Point& p);

// Smallest |eigenvalue| of the Ricci component matrix at p — the degeneracy
// the obstruction Ric(., A) = 0 forces when A is nonzero.
double ricci_smallest_abs_eigenvalue(const MetricField& g, const Point& p);

// <A,A> at p.
double field_norm2(const MetricField& g, const VectorField& a, const Point& p);

}  // namespace rk
