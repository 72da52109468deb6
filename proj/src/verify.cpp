#include "soliton/verify.hpp"

#include <algorithm>

#include "soliton/errors.hpp"
#include "soliton/parallel.hpp"

namespace soliton {

double full_lagrangian_angle(const Eigen::MatrixXcd& frame) {
  if (frame.rows() != frame.cols()) throw Error(ErrorCode::Precondition, "frame must be square");
  double scale = 1.0;
  for (Index j = 0; j < frame.cols(); ++j) scale *= frame.col(j).norm();
  cplx det = frame.determinant();
  if (scale == 0.0 || std::abs(det) <= 1e-12 * scale)
    throw Error(ErrorCode::DegenerateFrame, "frame vectors are linearly dependent");
  return std::arg(det);
}

double frame_omega_defect(const Eigen::MatrixXcd& frame) {
  double worst = 0.0;
  for (Index i = 0; i < frame.cols(); ++i)
    for (Index j = i + 1; j < frame.cols(); ++j) {
      double n = frame.col(i).norm() * frame.col(j).norm();
      if (n > 0.0) worst = std::max(worst, std::abs(omega0(frame.col(i), frame.col(j))) / n);
    }
  return worst;
}

namespace {

Eigen::VectorXcd lifted_point(const ProfileSurface& s, const GroupActionSpec& group,
                              const GroupElement& g, double x, double y) {
  return g.matrix * psi_embed(group, evaluate(s, x, y).z);
}

// central difference, shifted one-sided at the ends of the sampled range
Eigen::VectorXcd difference(const ProfileSurface& s, const GroupActionSpec& group, const GroupElement& g,
                            double x, double y, bool along_x) {
  const SampledCurve& c = along_x ? s.gamma : s.xi;
  double t = along_x ? x : y;
  double h = 1e-5 * std::max(1.0, std::abs(t));
  double lo = std::max(c.s_min(), t - h), hi = std::min(c.s_max(), t + h);
  auto at = [&](double u) { return along_x ? lifted_point(s, group, g, u, y) : lifted_point(s, group, g, x, u); };
  return (at(hi) - at(lo)) / (hi - lo);
}

}  // namespace

ImmersionSample immersion_sample(const ProfileSurface& surface, const GroupActionSpec& group,
                                 const GroupElement& g, double x, double y, FrameMode mode) {
  const int m = group.m;
  ProfilePoint p = evaluate(surface, x, y);
  ImmersionSample out;
  out.point = g.matrix * psi_embed(group, p.z);
  out.frame.resize(m, m);
  if (m > 2) out.frame.leftCols(m - 2) = orbit_fields(group, g, out.point);
  if (mode == FrameMode::Analytic) {
    out.frame.col(m - 2) = g.matrix * psi_push(group, p.dx);
    out.frame.col(m - 1) = g.matrix * psi_push(group, p.dy);
  } else {
    out.frame.col(m - 2) = difference(surface, group, g, x, y, true);
    out.frame.col(m - 1) = difference(surface, group, g, x, y, false);
  }
  out.angle = full_lagrangian_angle(out.frame);
  double expected = p.angle + (m - 2) * p.arg_z1 - (m - 1) * phi_phase(group);
  out.theta_residual = circle_distance(out.angle, expected, pi);
  out.omega_residual = frame_omega_defect(out.frame);
  return out;
}

std::vector<RelationSample> random_relation_samples(const ProfileSurface& surface, std::size_t elements,
                                                    int n, std::uint64_t seed) {
  Random rng(seed);
  std::vector<RelationSample> out;
  for (int k = 0; k < n; ++k) {
    RelationSample r;
    r.element = std::min(elements - 1, std::size_t(rng.uniform() * double(elements)));
    r.x = rng.uniform(surface.gamma.s_min(), surface.gamma.s_max());
    r.y = rng.uniform(surface.xi.s_min(), surface.xi.s_max());
    out.push_back(r);
  }
  return out;
}

double check_angle_relation(const ProfileSurface& surface, const GroupActionSpec& group,
                            const std::vector<GroupElement>& elements,
                            const std::vector<RelationSample>& samples, FrameMode mode) {
  std::vector<double> res(samples.size(), 0.0);
  parallel_for(Index(samples.size()), [&](Index k) {
    const auto& s = samples[k];
    res[k] = immersion_sample(surface, group, elements.at(s.element), s.x, s.y, mode).theta_residual;
  });
  return res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
}

Eigen::MatrixXd lifted_angles(const OrbitSampleSet& orbit, std::size_t element) {
  const auto& s = orbit.surface;
  const auto& group = orbit.group;
  const auto& g = orbit.elements.at(element);
  const int m = group.m;
  Eigen::MatrixXd out(s.rows(), s.cols());
  parallel_for(s.rows(), [&](Index i) {
    Eigen::MatrixXcd frame(m, m);
    for (Index j = 0; j < s.cols(); ++j) {
      ProfilePoint p = s.jet(i, j);
      Eigen::VectorXcd z = orbit.point(element, i, j);
      if (m > 2) frame.leftCols(m - 2) = orbit_fields(group, g, z);
      frame.col(m - 2) = g.matrix * psi_push(group, p.dx);
      frame.col(m - 1) = g.matrix * psi_push(group, p.dy);
      out(i, j) = full_lagrangian_angle(frame);
    }
  });
  return out;
}

namespace {

ConstantEstimate estimate(const std::vector<double>& values) {
  ConstantEstimate out;
  out.constant = wrap(circular_mean(values, pi), pi);
  for (double v : values) out.deviation = std::max(out.deviation, circle_distance(v, out.constant, pi));
  return out;
}

std::vector<double> lifted_values(const OrbitSampleSet& orbit, bool add_im_zm) {
  std::vector<double> values;
  const int m = orbit.group.m;
  for (std::size_t e = 0; e < orbit.elements.size(); ++e) {
    Eigen::MatrixXd th = lifted_angles(orbit, e);
    for (Index j = 0; j < th.cols(); ++j)
      for (Index i = 0; i < th.rows(); ++i)
        values.push_back(th(i, j) + (add_im_zm ? orbit.point(e, i, j)(m - 1).imag() : 0.0));
  }
  return values;
}

}  // namespace

ConstantEstimate check_translator_identity(const OrbitSampleSet& orbit) {
  const double a = orbit.surface.a, b = orbit.surface.b;
  if (!(a == -b && a != 0.0))
    throw Error(ErrorCode::WrongFamily, "translator identity needs a = -b != 0");
  return estimate(lifted_values(orbit, true));
}

ConstantEstimate check_special_lagrangian_angle(const OrbitSampleSet& orbit) {
  if (orbit.surface.a != 0.0 || orbit.surface.b != 0.0)
    throw Error(ErrorCode::WrongFamily, "special Lagrangian angle needs a = b = 0");
  return estimate(lifted_values(orbit, false));
}

namespace {

Eigen::MatrixXd unwrap_grid(const Eigen::MatrixXd& th, double period) {
  Eigen::MatrixXd out = th;
  for (Index i = 1; i < th.rows(); ++i) out(i, 0) = unwrap_step(out(i - 1, 0), th(i, 0), period);
  for (Index i = 0; i < th.rows(); ++i)
    for (Index j = 1; j < th.cols(); ++j) out(i, j) = unwrap_step(out(i, j - 1), th(i, j), period);
  return out;
}

}  // namespace

CalibrationVerdict almost_calibrated_check(const OrbitSampleSet& orbit) {
  double lo = 1e300, hi = -1e300;
  double anchor = 0.0;
  for (std::size_t e = 0; e < orbit.elements.size(); ++e) {
    Eigen::MatrixXd th = lifted_angles(orbit, e);
    // the unoriented angle is defined mod pi; jumps by pi where orbit fields flip sign
    Eigen::MatrixXd lift = unwrap_grid(th, pi);
    if (e == 0)
      anchor = lift(0, 0);
    else
      lift.array() += unwrap_step(anchor, lift(0, 0), pi) - lift(0, 0);
    lo = std::min(lo, lift.minCoeff());
    hi = std::max(hi, lift.maxCoeff());
  }
  CalibrationVerdict v;
  v.theta_range = hi - lo;
  v.almost_calibrated = v.theta_range < pi;
  return v;
}

namespace {

// real 2m x m representation of a complex frame
Eigen::MatrixXd realify(const Eigen::MatrixXcd& frame) {
  Eigen::MatrixXd r(2 * frame.rows(), frame.cols());
  r.topRows(frame.rows()) = frame.real();
  r.bottomRows(frame.rows()) = frame.imag();
  return r;
}

Eigen::MatrixXd projector(const Eigen::MatrixXcd& frame) {
  Eigen::MatrixXd r = realify(frame);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(r);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r.rows(), r.cols());
  return q * q.transpose();
}

}  // namespace

SingularProbe singular_set_probe(const ProfileSurface& surface, const GroupActionSpec& group,
                                 int elements, std::uint64_t seed) {
  SingularProbe probe;
  const SampledCurve* line = nullptr;
  const SampledCurve* other = nullptr;
  if (surface.gamma.spec.kind == CurveKind::Line && surface.gamma.passes_through_origin()) {
    probe.line_parameter = 'x';
    line = &surface.gamma;
    other = &surface.xi;
  } else if (surface.xi.spec.kind == CurveKind::Line && surface.xi.passes_through_origin()) {
    probe.line_parameter = 'y';
    line = &surface.xi;
    other = &surface.gamma;
  }
  if (!line || (surface.gamma.spec.kind == CurveKind::Line && surface.xi.spec.kind == CurveKind::Line)) {
    probe.reason = line ? "both profile curves are lines; the profile itself degenerates at the origin"
                        : "no profile parameter reaches z' = 0";
    probe.line_parameter = ' ';
    return probe;
  }
  probe.applicable = true;
  double fixed = other->params(other->size() / 2);
  auto gs = sample_group(group, elements, seed);
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    if (t > line->s_max()) continue;
    double x = probe.line_parameter == 'x' ? t : fixed;
    double y = probe.line_parameter == 'x' ? fixed : t;
    double smin = 1e300, spread = 0.0;
    Eigen::MatrixXd p0;
    for (std::size_t e = 0; e < gs.size(); ++e) {
      ImmersionSample s = immersion_sample(surface, group, gs[e], x, y);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(realify(s.frame));
      smin = std::min(smin, svd.singularValues()(svd.singularValues().size() - 1));
      Eigen::MatrixXd p = projector(s.frame);
      if (e == 0)
        p0 = p;
      else
        spread = std::max(spread, Eigen::JacobiSVD<Eigen::MatrixXd>(p - p0).singularValues()(0));
    }
    probe.offsets.push_back(t);
    probe.sigma_min.push_back(smin);
    probe.tangent_spread.push_back(spread);
  }
  if (probe.offsets.size() >= 2) {
    probe.rank_drop = probe.sigma_min.back() < 1e-2 * probe.sigma_min.front();
    probe.smooth_limit = probe.tangent_spread.back() < 1e-2;
  }
  return probe;
}

}  // namespace soliton
