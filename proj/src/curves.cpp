#include "soliton/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "soliton/errors.hpp"

namespace soliton {

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Line: return "line";
    case CurveKind::Lawlor: return "lawlor";
    case CurveKind::Shrinker: return "shrinker";
    case CurveKind::Expander: return "expander";
  }
  return "line";
}

CurveKind curve_kind_from_string(const std::string& name) {
  if (name == "line") return CurveKind::Line;
  if (name == "lawlor") return CurveKind::Lawlor;
  if (name == "shrinker") return CurveKind::Shrinker;
  if (name == "expander") return CurveKind::Expander;
  throw Error(ErrorCode::Config, "unknown curve kind '" + name + "'");
}

void CurveSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InconsistentParams, msg); };
  if (m < 2) fail("m must be at least 2");
  if (alpha.has_value() != (kind == CurveKind::Expander)) fail("alpha is present iff kind is expander");
  if (winding.has_value() != (kind == CurveKind::Shrinker)) fail("winding is present iff kind is shrinker");
  switch (kind) {
    case CurveKind::Line: break;
    case CurveKind::Lawlor:
      if (a != 0.0) fail("lawlor curves have a = 0");
      if (!(scale > 0.0)) fail("lawlor scale must be positive");
      break;
    case CurveKind::Shrinker:
      if (!(a < 0.0)) fail("shrinkers have a < 0");
      if (winding->p < 1 || winding->q < 1) fail("winding numbers must be positive");
      break;
    case CurveKind::Expander:
      if (!(a > 0.0)) fail("expanders have a > 0");
      if (!(*alpha > 0.0 && *alpha < pi / (m - 1))) fail("alpha outside (0, pi/(m-1))");
      break;
  }
}

CurveState SampledCurve::state(Index i) const {
  CurveState st;
  st.s = params(i);
  st.point = points(i);
  st.tangent_angle = tangent_angle(i);
  st.beta = beta(i);
  st.beta_tilde = beta_tilde(i);
  st.polar_angle = polar_angle(i);
  return st;
}

bool SampledCurve::passes_through_origin() const {
  if (spec.kind == CurveKind::Line) return s_min() <= 0.0 && s_max() >= 0.0;
  return false;
}

cplx eval_line(double s, double phase) { return std::polar(1.0, phase) * s; }

double lawlor_half_width(int m) { return pi / (2.0 * (m - 1)); }

cplx eval_lawlor(double s, int m, double scale) {
  if (m < 2) throw Error(ErrorCode::Domain, "m must be at least 2");
  if (std::abs(s) >= lawlor_half_width(m))
    throw Error(ErrorCode::Domain, "lawlor parameter outside (-pi/(2(m-1)), pi/(2(m-1)))");
  double n = m - 1;
  return scale * std::pow(std::cos(n * s), -1.0 / n) * std::polar(1.0, s);
}

double lawlor_arc_length(double t, int m, double scale) {
  if (std::abs(t) >= lawlor_half_width(m))
    throw Error(ErrorCode::Domain, "lawlor parameter outside the open domain");
  double n = m - 1;
  using V1 = Eigen::Matrix<double, 1, 1>;
  auto rhs = [n, scale](double u, const V1&) {
    V1 d;
    d(0) = scale * std::pow(std::cos(n * u), -1.0 / n - 1.0);
    return d;
  };
  StepControl ctl;
  ctl.rtol = ctl.atol = 1e-14;
  V1 y = V1::Zero();
  return dopri5<1>(rhs, y, 0.0, t, ctl, [](const V1&) {})(0);
}

namespace {

std::vector<double> uniform_nodes(double lo, double hi, Index count) {
  if (count < 2) throw Error(ErrorCode::Precondition, "need at least two samples");
  if (!(hi > lo)) throw Error(ErrorCode::Precondition, "empty parameter range");
  std::vector<double> s(count);
  for (Index i = 0; i < count; ++i)
    s[i] = i + 1 == count ? hi : lo + (hi - lo) * double(i) / double(count - 1);
  return s;
}

void allocate(SampledCurve& c, Index n) {
  c.params.resize(n);
  c.points.resize(n);
  c.tangents.resize(n);
  c.accelerations.resize(n);
  c.beta.resize(n);
  c.beta_tilde.resize(n);
  c.tangent_angle.resize(n);
  c.polar_angle.resize(n);
}

double curvature_of(const CurveState& st, int m, double a) {
  double r2 = std::norm(st.point);
  double db = std::imag(std::conj(st.point) * st.tangent());
  return -((m - 2) / r2 + a) * db;
}

void store(SampledCurve& c, Index i, const CurveState& st) {
  c.params(i) = st.s;
  c.points(i) = st.point;
  c.tangents(i) = st.tangent();
  c.accelerations(i) = curvature_of(st, c.spec.m, c.spec.a) * I * st.tangent();
  c.beta(i) = st.beta;
  c.beta_tilde(i) = st.beta_tilde;
  c.tangent_angle(i) = st.tangent_angle;
  c.polar_angle(i) = st.polar_angle;
}

CurveState initial_state(cplx gamma0, cplx tangent0) {
  CurveState st;
  st.s = 0.0;
  st.point = gamma0;
  st.tangent_angle = std::arg(tangent0);
  st.polar_angle = std::arg(gamma0);
  return st;
}

// Sample a solution on the given nodes, integrating outwards from s = 0.
SampledCurve sample_solution(const CurveSpec& spec, const CurveState& start,
                             const std::vector<double>& nodes, const OdeOptions& opts) {
  SampledCurve c;
  c.spec = spec;
  c.source = CurveSource::Integrated;
  c.ode = opts;
  Index n = Index(nodes.size());
  allocate(c, n);
  auto first_pos = std::lower_bound(nodes.begin(), nodes.end(), 0.0) - nodes.begin();
  CurveState st = start;
  for (Index i = first_pos; i < n; ++i) {
    st = integrate_state(st, nodes[i], spec.m, spec.a, opts);
    store(c, i, st);
  }
  st = start;
  for (Index i = first_pos - 1; i >= 0; --i) {
    st = integrate_state(st, nodes[i], spec.m, spec.a, opts);
    store(c, i, st);
  }
  return c;
}

CurveKind kind_for(double a) {
  if (a < 0.0) return CurveKind::Shrinker;
  if (a > 0.0) return CurveKind::Expander;
  return CurveKind::Lawlor;
}

// Arc length at which the polar angle first reaches `target` walking forward from `start`.
double arc_length_at_polar_angle(const CurveState& start, double target, int m, double a,
                                 const OdeOptions& opts, double s_limit) {
  const double chunk = 0.05;
  CurveState st = start;
  while (st.polar_angle < target) {
    if (st.s > s_limit) throw Error(ErrorCode::NoConvergence, "polar angle target not reached");
    CurveState next = integrate_state(st, st.s + chunk, m, a, opts);
    if (next.polar_angle >= target) {
      double lo = st.s, hi = next.s;
      for (int k = 0; k < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++k) {
        double mid = 0.5 * (lo + hi);
        if (integrate_state(st, mid, m, a, opts).polar_angle < target)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    st = next;
  }
  return st.s;
}

}  // namespace

SampledCurve integrate_curve_ode(double a, int m, cplx gamma0, cplx tangent0,
                                 std::pair<double, double> s_range, double tol, Index count) {
  if (std::abs(gamma0) == 0.0) throw Error(ErrorCode::Precondition, "gamma0 must be nonzero");
  if (std::abs(std::abs(tangent0) - 1.0) > 1e-12)
    throw Error(ErrorCode::Precondition, "tangent0 must be a unit complex number");
  if (m < 2) throw Error(ErrorCode::Precondition, "m must be at least 2");
  CurveSpec spec;
  spec.kind = kind_for(a);
  spec.m = m;
  spec.a = a;
  OdeOptions opts;
  opts.tol = tol;
  return sample_solution(spec, initial_state(gamma0, tangent0),
                         uniform_nodes(s_range.first, s_range.second, count), opts);
}

SampledCurve make_line(int m, double a, double phase, std::pair<double, double> s_range,
                       Index count) {
  SampledCurve c;
  c.spec.kind = CurveKind::Line;
  c.spec.m = m;
  c.spec.a = a;
  c.spec.phase = phase;
  c.spec.validate();
  c.source = CurveSource::Analytic;
  auto nodes = uniform_nodes(s_range.first, s_range.second, count);
  allocate(c, count);
  for (Index i = 0; i < count; ++i) {
    double s = nodes[i];
    c.params(i) = s;
    c.points(i) = eval_line(s, phase);
    c.tangents(i) = std::polar(1.0, phase);
    c.accelerations(i) = 0.0;
    c.beta(i) = 0.0;
    c.beta_tilde(i) = 0.0;
    c.tangent_angle(i) = phase;
    c.polar_angle(i) = s < 0.0 ? phase + pi : phase;
  }
  return c;
}

SampledCurve make_lawlor(int m, double scale, double phase, const Sampling& sampling,
                         const OdeOptions& opts) {
  CurveSpec spec;
  spec.kind = CurveKind::Lawlor;
  spec.m = m;
  spec.scale = scale;
  spec.validate();
  double extent = sampling.arc_length
                      ? *sampling.arc_length
                      : lawlor_arc_length(sampling.angle_fraction * lawlor_half_width(m), m, scale);
  SampledCurve c = sample_solution(spec, initial_state(scale, I),
                                   uniform_nodes(-extent, extent, sampling.count), opts);
  return phase == 0.0 ? c : rotated(c, phase);
}

SampledCurve sample_lawlor_closed_form(int m, double scale, double phase, const Sampling& sampling) {
  SampledCurve c;
  c.spec.kind = CurveKind::Lawlor;
  c.spec.m = m;
  c.spec.scale = scale;
  c.spec.validate();
  c.source = CurveSource::Integrated;
  double t_max = sampling.angle_fraction * lawlor_half_width(m);
  auto ts = uniform_nodes(-t_max, t_max, sampling.count);
  allocate(c, sampling.count);
  double n = m - 1;
  for (Index i = 0; i < sampling.count; ++i) {
    double t = ts[i];
    double speed = scale * std::pow(std::cos(n * t), -1.0 / n - 1.0);
    double phi = pi / 2 - (m - 2) * t;
    double kappa = -(m - 2) / speed;
    cplx T = std::polar(1.0, phi);
    c.params(i) = lawlor_arc_length(t, m, scale);
    c.points(i) = eval_lawlor(t, m, scale);
    c.tangents(i) = T;
    c.accelerations(i) = kappa * I * T;
    c.tangent_angle(i) = phi;
    c.polar_angle(i) = t;
  }
  // beta' = r^2 theta', beta~' = r^4 theta'; quadrature in the polar angle
  using V2 = Eigen::Matrix<double, 2, 1>;
  auto rhs = [m, scale](double u, const V2&) {
    double r2 = std::norm(eval_lawlor(u, m, scale));
    V2 d;
    d << r2, r2 * r2;
    return d;
  };
  StepControl ctl;
  ctl.rtol = ctl.atol = 1e-14;
  for (Index i = 0; i < sampling.count; ++i) {
    V2 y = dopri5<2>(rhs, V2::Zero().eval(), 0.0, ts[i], ctl, [](const V2&) {});
    c.beta(i) = y(0);
    c.beta_tilde(i) = y(1);
  }
  return phase == 0.0 ? c : rotated(c, phase);
}

double expander_shooting_length(double a) { return std::sqrt(80.0 / a); }

ExpanderShot shoot_expander(double a, int m, double r0, const OdeOptions& opts) {
  CurveState st = integrate_state(initial_state(r0, I), expander_shooting_length(a) + r0, m, a, opts);
  return {r0, 2.0 * st.polar_angle};
}

SampledCurve find_expander_profile(double a, double alpha, int m, double tol,
                                   const Sampling& sampling) {
  if (!(a > 0.0)) throw Error(ErrorCode::Precondition, "expanders need a > 0");
  if (m < 2) throw Error(ErrorCode::Precondition, "m must be at least 2");
  if (!(alpha > 0.0 && alpha < pi / (m - 1)))
    throw Error(ErrorCode::Precondition, "alpha must lie in (0, pi/(m-1))");
  OdeOptions opts;
  opts.tol = std::min(tol, 1e-12);

  double lo = 0.05 / std::sqrt(a), hi = 4.0 / std::sqrt(a);
  auto span = [&](double r) { return shoot_expander(a, m, r, opts).span; };
  for (int k = 0; span(lo) < alpha; ++k) {
    if (k > 10) throw Error(ErrorCode::NoConvergence, "expander bracket: span too small at small radius");
    lo *= 0.5;
  }
  for (int k = 0; span(hi) > alpha; ++k) {
    if (k > 20) throw Error(ErrorCode::NoConvergence, "expander bracket: span too large at large radius");
    hi *= 1.5;
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    double mid = 0.5 * (lo + hi);
    if (span(mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  double r0 = 0.5 * (lo + hi);
  double achieved = span(r0);
  if (std::abs(achieved - alpha) > std::max(1e-8, tol)) {
    std::ostringstream msg;
    msg << "expander shooting reached span " << achieved << " for target " << alpha;
    throw Error(ErrorCode::NoConvergence, msg.str());
  }

  CurveSpec spec;
  spec.kind = CurveKind::Expander;
  spec.m = m;
  spec.a = a;
  spec.alpha = alpha;
  double full = expander_shooting_length(a) + r0;
  double extent = full;
  if (sampling.arc_length)
    extent = *sampling.arc_length;
  else if (sampling.angle_fraction < 1.0)
    extent = arc_length_at_polar_angle(initial_state(r0, I), sampling.angle_fraction * alpha / 2, m,
                                       a, opts, full);
  SampledCurve c = sample_solution(spec, initial_state(r0, I),
                                   uniform_nodes(-extent, extent, sampling.count), opts);
  c.shooting_radius = r0;
  return c;
}

double shrinker_circle_radius(double b, int m) { return std::sqrt((m - 1) / b); }

ShrinkerPeriod shrinker_period(double b, int m, double r0, const OdeOptions& opts) {
  const double a = -b;
  const double chunk = 0.02;
  const double max_length = 400.0;
  CurveState start = initial_state(r0, I);
  auto radial = [](const CurveState& st) { return std::real(std::conj(st.point) * st.tangent()); };
  CurveState st = start;
  double r_min = r0;
  bool passed_min = false;
  while (st.s < max_length) {
    CurveState next = integrate_state(st, st.s + chunk, m, a, opts);
    r_min = std::min(r_min, std::abs(next.point));
    double g0 = radial(st), g1 = radial(next);
    if (!passed_min) {
      if (g0 < 0.0 && g1 >= 0.0) passed_min = true;
    } else if (g0 > 0.0 && g1 <= 0.0) {
      double lo = st.s, hi = next.s;
      for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
        double mid = 0.5 * (lo + hi);
        if (radial(integrate_state(st, mid, m, a, opts)) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      CurveState end = integrate_state(st, 0.5 * (lo + hi), m, a, opts);
      return {r0, end.s, end.polar_angle - start.polar_angle, r_min};
    }
    st = next;
  }
  throw Error(ErrorCode::NoClosure, "no radius period found");
}

SampledCurve find_shrinker_profile(double b, int p, int q, int m, double tol,
                                   const Sampling& sampling) {
  if (!(b > 0.0)) throw Error(ErrorCode::Precondition, "shrinkers need b > 0");
  if (p < 1 || q < 1) throw Error(ErrorCode::Precondition, "p and q must be positive");
  if (m < 2) throw Error(ErrorCode::Precondition, "m must be at least 2");
  OdeOptions opts;
  opts.tol = 1e-12;
  const double target = 2.0 * pi * p / q;
  const double r_star = shrinker_circle_radius(b, m);

  // scan outwards from the round solution; delta_theta falls as the radius grows
  double prev_r = 0.0, prev_f = 0.0;
  bool have_prev = false, bracketed = false;
  double lo = 0.0, hi = 0.0;
  double seen_min = 1e300, seen_max = -1e300;
  for (int k = 0; k < 80 && !bracketed; ++k) {
    double r = r_star * (1.0 + 1e-3 * std::pow(1.1, k));
    double f;
    try {
      f = shrinker_period(b, m, r, opts).delta_theta - target;
    } catch (const Error&) {
      break;
    }
    seen_min = std::min(seen_min, f + target);
    seen_max = std::max(seen_max, f + target);
    if (have_prev && (prev_f > 0.0) != (f > 0.0)) {
      lo = prev_r;
      hi = r;
      bracketed = true;
    }
    prev_r = r;
    prev_f = f;
    have_prev = true;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "(p, q) = (" << p << ", " << q << ") not admissible: per-period angle / 2pi ranged over ["
        << seen_min / (2 * pi) << ", " << seen_max / (2 * pi) << "]";
    throw Error(ErrorCode::NoClosure, msg.str());
  }
  double f_lo = shrinker_period(b, m, lo, opts).delta_theta - target;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    double mid = 0.5 * (lo + hi);
    double f = shrinker_period(b, m, mid, opts).delta_theta - target;
    if ((f > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
  }
  double r0 = 0.5 * (lo + hi);
  ShrinkerPeriod period = shrinker_period(b, m, r0, opts);
  if (std::abs(period.delta_theta - target) > std::max(tol, 1e-9))
    throw Error(ErrorCode::NoClosure, "rotation number did not converge");

  CurveSpec spec;
  spec.kind = CurveKind::Shrinker;
  spec.m = m;
  spec.a = -b;
  spec.winding = Winding{p, q};

  CurveState start = initial_state(r0, I);
  CurveState closed = integrate_state(start, q * period.length, m, spec.a, opts);
  double gap = std::abs(closed.point - start.point);
  if (gap > std::max(1e-6, 100.0 * tol) * r0) {
    std::ostringstream msg;
    msg << "curve fails to close after q periods, gap " << gap;
    throw Error(ErrorCode::NoClosure, msg.str());
  }

  int periods = sampling.periods.value_or(q);
  double extent = sampling.arc_length.value_or(0.5 * periods * period.length);
  SampledCurve c = sample_solution(spec, start, uniform_nodes(-extent, extent, sampling.count), opts);
  c.period = period.length;
  c.shooting_radius = r0;
  return c;
}

SampledCurve rotated(const SampledCurve& curve, double phase) {
  SampledCurve c = curve;
  cplx u = std::polar(1.0, phase);
  c.spec.phase += phase;
  c.points *= u;
  c.tangents *= u;
  c.accelerations *= u;
  c.tangent_angle.array() += phase;
  c.polar_angle.array() += phase;
  return c;
}

namespace {

void check_range(const SampledCurve& c, double s) {
  double slack = 1e-12 * std::max(1.0, std::abs(c.s_max() - c.s_min()));
  if (s < c.s_min() - slack || s > c.s_max() + slack)
    throw Error(ErrorCode::OutOfRange, "parameter outside the sampled range");
}

Index nearest_node(const SampledCurve& c, double s) {
  const double* begin = c.params.data();
  const double* end = begin + c.params.size();
  Index hi = std::lower_bound(begin, end, s) - begin;
  if (hi == 0) return 0;
  if (hi >= c.params.size()) return c.params.size() - 1;
  return (s - c.params(hi - 1) <= c.params(hi) - s) ? hi - 1 : hi;
}

// cubic Hermite on [s0, s1]
template <typename T>
T hermite(double s0, double s1, const T& y0, const T& y1, const T& d0, const T& d1, double s) {
  double h = s1 - s0;
  double t = (s - s0) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

CurveState evaluate(const SampledCurve& curve, double s) {
  check_range(curve, s);
  if (curve.source == CurveSource::Analytic) {
    CurveState st;
    st.s = s;
    st.point = eval_line(s, curve.spec.phase);
    st.tangent_angle = curve.spec.phase;
    st.polar_angle = s < 0.0 ? curve.spec.phase + pi : curve.spec.phase;
    return st;
  }
  Index i = nearest_node(curve, s);
  if (curve.params(i) == s) return curve.state(i);
  if (curve.source == CurveSource::Integrated)
    return integrate_state(curve.state(i), s, curve.spec.m, curve.spec.a, curve.ode);

  Index j0 = std::clamp<Index>(curve.params(i) <= s ? i : i - 1, 0, curve.size() - 2);
  Index j1 = j0 + 1;
  double s0 = curve.params(j0), s1 = curve.params(j1);
  auto db = [&](Index j) { return std::imag(std::conj(curve.points(j)) * curve.tangents(j)); };
  CurveState st;
  st.s = s;
  st.point = hermite(s0, s1, curve.points(j0), curve.points(j1), curve.tangents(j0),
                     curve.tangents(j1), s);
  double w = (s - s0) / (s1 - s0);
  st.tangent_angle = (1 - w) * curve.tangent_angle(j0) + w * curve.tangent_angle(j1);
  st.polar_angle = (1 - w) * curve.polar_angle(j0) + w * curve.polar_angle(j1);
  st.beta = hermite(s0, s1, curve.beta(j0), curve.beta(j1), db(j0), db(j1), s);
  st.beta_tilde = hermite(s0, s1, curve.beta_tilde(j0), curve.beta_tilde(j1),
                          std::norm(curve.points(j0)) * db(j0), std::norm(curve.points(j1)) * db(j1), s);
  return st;
}

double beta_at(const SampledCurve& curve, double s) { return evaluate(curve, s).beta; }

double beta_tilde_at(const SampledCurve& curve, double s) { return evaluate(curve, s).beta_tilde; }

double beta_range(const SampledCurve& curve) { return curve.beta.maxCoeff() - curve.beta.minCoeff(); }

double curvature_residual(const SampledCurve& curve) {
  const Index n = curve.size();
  if (n < 3) throw Error(ErrorCode::Precondition, "need at least three samples");
  Eigen::VectorXcd acc = curve.accelerations;
  if (acc.size() != n) {
    // second-order differences of the stored tangents
    acc.resize(n);
    for (Index i = 0; i < n; ++i) {
      Index j = std::clamp<Index>(i, 1, n - 2);
      double h0 = curve.params(j) - curve.params(j - 1), h1 = curve.params(j + 1) - curve.params(j);
      cplx t0 = curve.tangents(j - 1), t1 = curve.tangents(j), t2 = curve.tangents(j + 1);
      acc(i) = (-h1 / (h0 * (h0 + h1))) * t0 + ((h1 - h0) / (h0 * h1)) * t1 + (h0 / (h1 * (h0 + h1))) * t2;
    }
  }
  const int m = curve.spec.m;
  const double a = curve.spec.a;
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    cplx g = curve.points(i);
    cplx t = curve.tangents(i);
    double r2 = std::norm(g);
    double normal = std::real(std::conj(g) * (I * t));
    cplx rhs = normal == 0.0 ? cplx(0.0) : ((m - 2) / r2 + a) * normal * (I * t);
    worst = std::max(worst, std::abs(acc(i) - rhs));
  }
  return worst;
}

double first_integral_deviation(const SampledCurve& curve, double sign) {
  const int m = curve.spec.m;
  Eigen::VectorXd v = curve.tangent_angle + (m - 2) * curve.polar_angle + sign * curve.spec.a * curve.beta;
  if (curve.spec.kind == CurveKind::Line) {
    double c = circular_mean(v, pi);
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, circle_distance(x, c, pi));
    return worst;
  }
  return v.maxCoeff() - v.minCoeff();
}

double arc_length_defect(const SampledCurve& curve) {
  return (curve.tangents.cwiseAbs().array() - 1.0).abs().maxCoeff();
}

}  // namespace soliton
