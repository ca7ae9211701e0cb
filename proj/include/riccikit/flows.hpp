#pragma once

#include <optional>
#include <vector>

#include "riccikit/curvature.hpp"
#include "riccikit/metric.hpp"

namespace rk {

// Classical RK4 with step-halving error control: each step is taken once at h
// and twice at h/2; the Richardson gap estimates the local error, steps are
// halved until the estimate fits the budget and cautiously re-doubled when
// far below it.
struct StepControl {
  double initial_step = 1e-2;
  double tol = 1e-9;        // local error per unit step, relative to 1 + |state|
  double escape = 1e6;      // |state| threshold treated as numerical blow-up
  double max_step = 0.25;
  double min_step = 1e-12;
  int max_steps = 2'000'000;
};

enum class FlowVerdict { completed, left_domain, blow_up };
const char* to_string(FlowVerdict v);

struct GeodesicState {
  double t = 0.0;
  Vec x;
  Vec v;
};

struct Trajectory {
  std::vector<GeodesicState> states;  // every accepted step, including t = 0
  FlowVerdict verdict = FlowVerdict::completed;
  double t_end = 0.0;                       // last time inside the domain
  std::optional<double> blowup_estimate;    // refined estimate when verdict == blow_up
};

// Integrate x'' + Gamma(x)(x', x') = 0 from (x0, v0) up to t_max.  Leaves the
// run at the domain boundary with the exit time bisected to 1e-6, or reports
// blow-up when |v| crosses the escape threshold.
Trajectory integrate_geodesic(const MetricField& g, const Point& x0, const Vec& v0, double t_max,
                              const StepControl& ctrl = {});

// Factor a non-null transport-compatible field as A = f U (f = |<A,A>|^{1/2},
// U unit) and flow along the unit-speed geodesic tangent to U from x0.  Along
// the flow, theory gives the closed form
//   f(t) = 2 f0 / (2 - eps f0 t),   eps = sign <A,A>,
// which blows up at t* = 2/(eps f0) (ahead of the start only when eps > 0).
struct PregeodesicRun {
  Trajectory traj;
  std::vector<double> f_track;         // f at each trajectory state
  double f0 = 0.0;
  int eps = 0;                         // +1 spacelike, -1 timelike
  double predicted_blowup = 0.0;       // 2 / (eps f0); meaningful when > 0
  // max relative deviation |f - f_closed| / f_closed over states with
  // t <= frac * predicted_blowup (only when predicted_blowup > 0).
  double max_rel_dev(double frac) const;
  double closed_form(double t) const { return 2.0 * f0 / (2.0 - eps * f0 * t); }
};

PregeodesicRun integrate_pregeodesic(const MetricField& g, const VectorField& a, const Point& x0,
                                     double t_max, const StepControl& ctrl = {});

// Parallel orthonormal frame E_0 = gamma', E_1, ..., E_{m-1} transported
// along a geodesic (same initial data as `traj`), with the field's inner
// products a_i(t) = <A(gamma(t)), E_i(t)> recorded at every accepted step.
// The initial frame is built by signature-aware Gram-Schmidt over gamma' and
// the coordinate directions, skipping candidates whose orthogonal complement
// is numerically degenerate (null directions).
struct FrameTransport {
  std::vector<double> t;
  std::vector<Matrix> frames;       // rows = frame vectors at each recorded time
  std::vector<Vec> inner_tracks;    // inner_tracks[k][i] = <A, E_i> at time t[k]
  std::vector<int> eps;             // <E_i, E_i> = eps[i] (+1 or -1)
  double orthonormality_drift = 0.0;
};

FrameTransport transport_coefficients(const MetricField& g, const VectorField& a,
                                      const Trajectory& traj, const StepControl& ctrl = {});

// Scalar ODE track with blow-up detection.  The blow-up estimate is refined
// by a least-squares fit of t against 1/y over the last decade of growth
// (t ~ t* - k/y as y -> infinity for quadratically forced growth).
struct OdeTrack {
  std::vector<double> t;
  std::vector<double> y;
  FlowVerdict verdict = FlowVerdict::completed;
  double t_end = 0.0;
  std::optional<double> blowup_estimate;
};

// da0/dt = a0^2 with a0(0) = eps * alpha: closed form
// a0(t) = eps alpha / (1 - eps alpha t), blowing up at t = 1/(eps alpha) when
// eps alpha > 0.  alpha = 0 yields the zero track.
OdeTrack null_coefficient_ode(double alpha, int eps, double t_max, const StepControl& ctrl = {});
double null_coefficient_closed_form(double alpha, int eps, double t);

// dy/dt = y^2/2 + f(t) with y(0) = y0 > 0 and f > 0 on [0, t_max] (f == 0 is
// admitted only with allow_zero_f, as the comparison boundary case).  Theory
// guarantees escape before the comparison solution phi(t) = 2 y0/(2 - y0 t)
// does, i.e. t_escape < 2/y0, with y(t) >= phi(t) pointwise.
struct RiccatiRun {
  OdeTrack track;
  double comparison_bound = 0.0;   // 2 / y0
  double min_margin = 0.0;         // min over track of y(t) - phi(t)
  bool dominates_comparison = false;
};

RiccatiRun riccati_blowup(const Expr& f_of_t, double y0, double t_max, bool allow_zero_f = false,
                          const StepControl& ctrl = {});

// Residual of the transported-coefficient ODE along a timelike unit-speed
// geodesic: with A = sum_i c_i E_i in a parallel orthonormal frame
// (c_i = eps_i <A, E_i>), transport-compatibility forces
//   dc_0/dt = -c_0^2/2 - f(t),   f(t) = (1/2) sum_{i>=1} eps_i c_i^2,
// where eps_i = +1 for every i >= 1 in a (-,+,...,+)-type frame, making f the
// familiar half sum of squares.  Returns the max over interior grid points of
// |dc_0/dt - rhs| with dc_0/dt from 3-point differences of the c_0 track.
struct CoefficientOdeReport {
  double residual = 0.0;
  std::vector<double> t;
  std::vector<double> c0;
  std::vector<double> f;   // forcing term track
};
CoefficientOdeReport coefficient_ode_timelike(const MetricField& g, const VectorField& a,
                                              const Trajectory& traj);

}  // namespace rk
