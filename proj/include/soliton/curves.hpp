#pragma once

#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "soliton/geometry.hpp"
#include "soliton/ode.hpp"

namespace soliton {

enum class CurveKind { Line, Lawlor, Shrinker, Expander };

const char* to_string(CurveKind kind);
CurveKind curve_kind_from_string(const std::string& name);

struct Winding {
  int p = 1;
  int q = 1;
};

struct CurveSpec {
  CurveKind kind = CurveKind::Line;
  int m = 3;
  double a = 0.0;
  double phase = 0.0;
  double scale = 1.0;
  std::optional<double> alpha;
  std::optional<Winding> winding;

  // Throws InconsistentParams when the sign of a, alpha or winding disagree with kind.
  void validate() const;
};

// One point of an arc-length parametrized solution together with its primitives.
struct CurveState {
  double s = 0.0;
  cplx point;
  double tangent_angle = 0.0;  // continuous lift of arg(gamma')
  double beta = 0.0;
  double beta_tilde = 0.0;
  double polar_angle = 0.0;    // continuous lift of arg(gamma)

  cplx tangent() const { return std::polar(1.0, tangent_angle); }
};

enum class CurveSource {
  Analytic,      // lines, evaluated in closed form
  Integrated,    // off-node values come from re-integrating the ODE
  Interpolated   // raw samples, cubic Hermite between nodes
};

struct OdeOptions {
  double tol = 1e-12;
  double floor = 1e-6;
  StepControl control{};
};

struct SampledCurve {
  CurveSpec spec;
  CurveSource source = CurveSource::Integrated;
  OdeOptions ode{};
  Eigen::VectorXd params;
  Eigen::VectorXcd points;
  Eigen::VectorXcd tangents;
  Eigen::VectorXcd accelerations;
  Eigen::VectorXd beta;
  Eigen::VectorXd beta_tilde;
  Eigen::VectorXd tangent_angle;
  Eigen::VectorXd polar_angle;
  // radius-oscillation period for shrinkers, 0 otherwise
  double period = 0.0;
  // initial radius found by shooting (expander, shrinker)
  double shooting_radius = 0.0;

  Index size() const { return params.size(); }
  double s_min() const { return params(0); }
  double s_max() const { return params(params.size() - 1); }
  CurveState state(Index i) const;
  bool passes_through_origin() const;
};

// How an open or periodic curve is cut down to a finite sample set.
struct Sampling {
  Index count = 200;
  // Lawlor / expander: truncate where |polar angle| reaches this fraction of the half-width
  double angle_fraction = 0.95;
  // explicit symmetric arc-length extent, overrides angle_fraction
  std::optional<double> arc_length;
  // shrinker: number of radius periods covered (default q)
  std::optional<int> periods;
};

// angle_fraction = 1 keeps the whole shooting range (expanders only)
inline Sampling full_sampling(Index count = 400) {
  Sampling s;
  s.count = count;
  s.angle_fraction = 1.0;
  return s;
}

// closed forms
cplx eval_line(double s, double phase);
cplx eval_lawlor(double s, int m, double scale);
double lawlor_half_width(int m);
// arc length from the neck (polar angle 0) to polar angle t on the scale-mu Lawlor curve
double lawlor_arc_length(double t, int m, double scale);

// gamma'' = ((m-2)/|gamma|^2 + a) <gamma, i gamma'> i gamma'
Eigen::Matrix<double, 6, 1> curve_rhs(const Eigen::Matrix<double, 6, 1>& y, int m, double a);

CurveState integrate_state(const CurveState& start, double s_end, int m, double a,
                           const OdeOptions& opts = {});

// gamma0, tangent0 are the data at s = 0; spec.kind is inferred from the sign of a.
SampledCurve integrate_curve_ode(double a, int m, cplx gamma0, cplx tangent0,
                                 std::pair<double, double> s_range, double tol,
                                 Index count = 201);

SampledCurve make_line(int m, double a, double phase, std::pair<double, double> s_range,
                       Index count = 200);
SampledCurve make_lawlor(int m, double scale, double phase, const Sampling& sampling = {},
                         const OdeOptions& opts = {});
// Lawlor curve sampled from the closed form, with exact tangents and accelerations.
SampledCurve sample_lawlor_closed_form(int m, double scale, double phase,
                                       const Sampling& sampling = {});

struct ExpanderShot {
  double radius;
  double span;  // 2 * limiting polar angle
};

// expander length used for shooting: tails beyond it are below double precision
double expander_shooting_length(double a);
ExpanderShot shoot_expander(double a, int m, double r0, const OdeOptions& opts = {});
SampledCurve find_expander_profile(double a, double alpha, int m, double tol = 1e-12,
                                   const Sampling& sampling = full_sampling());

struct ShrinkerPeriod {
  double radius;        // maximal radius, start of the period
  double length;        // arc length of one radius period
  double delta_theta;   // polar angle swept over one period
  double min_radius;
};

double shrinker_circle_radius(double b, int m);
ShrinkerPeriod shrinker_period(double b, int m, double r0, const OdeOptions& opts = {});
SampledCurve find_shrinker_profile(double b, int p, int q, int m, double tol = 1e-10,
                                   const Sampling& sampling = {});

// apply e^{i phi} to a sampled curve
SampledCurve rotated(const SampledCurve& curve, double phase);

CurveState evaluate(const SampledCurve& curve, double s);
double beta_at(const SampledCurve& curve, double s);
double beta_tilde_at(const SampledCurve& curve, double s);
double beta_range(const SampledCurve& curve);

double curvature_residual(const SampledCurve& curve);
// spread (max - min) of arg(gamma') + (m-2) arg(gamma) + sign * a * beta along the samples;
// lines use the mod-pi distance to the circular mean since arg(gamma) jumps at the origin.
double first_integral_deviation(const SampledCurve& curve, double sign);
double arc_length_defect(const SampledCurve& curve);

}  // namespace soliton
