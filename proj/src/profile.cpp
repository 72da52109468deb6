#include "soliton/profile.hpp"

#include <array>
#include <vector>

#include "soliton/errors.hpp"
#include "soliton/parallel.hpp"

namespace soliton {

const char* to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::A_plane: return "a";
    case FamilyTag::B_lawlor_line: return "b";
    case FamilyTag::C_lawlor_lawlor: return "c";
    case FamilyTag::D_line_shrinker: return "d";
    case FamilyTag::E_expander_line: return "e";
    case FamilyTag::F_expander_shrinker: return "f";
  }
  return "a";
}

FamilyTag family_from_string(const std::string& name) {
  if (name == "a") return FamilyTag::A_plane;
  if (name == "b") return FamilyTag::B_lawlor_line;
  if (name == "c") return FamilyTag::C_lawlor_lawlor;
  if (name == "d") return FamilyTag::D_line_shrinker;
  if (name == "e") return FamilyTag::E_expander_line;
  if (name == "f") return FamilyTag::F_expander_shrinker;
  throw Error(ErrorCode::Config, "unknown family '" + name + "' (expected a-f)");
}

bool is_translator_family(FamilyTag tag) {
  return tag == FamilyTag::D_line_shrinker || tag == FamilyTag::E_expander_line ||
         tag == FamilyTag::F_expander_shrinker;
}

ProfilePoint profile_point(const CurveState& g, const CurveState& xi) {
  ProfilePoint p;
  cplx gp = g.tangent(), xp = xi.tangent();
  double g2 = std::norm(g.point), x2 = std::norm(xi.point);
  p.z(0) = g.point * xi.point;
  p.z(1) = cplx(0.5 * (x2 - g2), xi.beta - g.beta);
  p.dx << gp * xi.point, -gp * std::conj(g.point);
  p.dy << xp * g.point, xp * std::conj(xi.point);
  p.angle = g.tangent_angle + xi.tangent_angle;
  p.primitive = -0.5 * (g2 - x2) * (g.beta - xi.beta) + g.beta_tilde + xi.beta_tilde;
  p.arg_z1 = g.polar_angle + xi.polar_angle;
  return p;
}

ProfilePoint ProfileSurface::jet(Index i, Index j) const {
  return profile_point(gamma.state(i), xi.state(j));
}

ProfilePoint evaluate(const ProfileSurface& surface, double x, double y) {
  return profile_point(evaluate(surface.gamma, x), evaluate(surface.xi, y));
}

ProfileSurface build_profile(const SampledCurve& gamma, const SampledCurve& xi) {
  if (gamma.spec.m != xi.spec.m) throw Error(ErrorCode::InconsistentParams, "curves disagree on m");
  const double floor = 1e-12;
  bool gamma_zero = (gamma.points.cwiseAbs().array() < floor).any();
  bool xi_zero = (xi.points.cwiseAbs().array() < floor).any();
  if (gamma_zero && xi_zero)
    throw Error(ErrorCode::Precondition, "both curves pass through zero on the sampled grid");

  ProfileSurface s;
  s.gamma = gamma;
  s.xi = xi;
  s.m = gamma.spec.m;
  s.a = gamma.spec.a;
  s.b = xi.spec.a;
  const Index nx = gamma.size(), ny = xi.size();
  s.z1.resize(nx, ny);
  s.z2.resize(nx, ny);
  s.angle.resize(nx, ny);
  s.primitive.resize(nx, ny);
  s.arg_z1.resize(nx, ny);
  parallel_for(nx, [&](Index i) {
    CurveState g = gamma.state(i);
    for (Index j = 0; j < ny; ++j) {
      ProfilePoint p = profile_point(g, xi.state(j));
      s.z1(i, j) = p.z(0);
      s.z2(i, j) = p.z(1);
      s.angle(i, j) = p.angle;
      s.primitive(i, j) = p.primitive;
      s.arg_z1(i, j) = p.arg_z1;
    }
  });
  return s;
}

double check_lagrangian(const ProfileSurface& surface) {
  double worst = 0.0;
  for (Index i = 0; i < surface.rows(); ++i)
    for (Index j = 0; j < surface.cols(); ++j) {
      ProfilePoint p = surface.jet(i, j);
      worst = std::max(worst, std::abs(omega0(p.dx, p.dy)));
    }
  return worst;
}

namespace {

AngleConstant constant_of(const Eigen::MatrixXd& values) {
  AngleConstant out;
  out.constant = wrap(circular_mean(values.reshaped(), pi), pi);
  for (double v : values.reshaped()) out.deviation = std::max(out.deviation, circle_distance(v, out.constant, pi));
  return out;
}

}  // namespace

AngleConstant angle_formula_constant(const ProfileSurface& surface, double sign) {
  Eigen::MatrixXd c(surface.rows(), surface.cols());
  for (Index i = 0; i < surface.rows(); ++i)
    for (Index j = 0; j < surface.cols(); ++j)
      c(i, j) = surface.angle(i, j) +
                sign * (surface.a * surface.gamma.beta(i) + surface.b * surface.xi.beta(j)) +
                (surface.m - 2) * surface.arg_z1(i, j);
  return constant_of(c);
}

double check_angle_formula(const ProfileSurface& surface) {
  return angle_formula_constant(surface, 1.0).deviation;
}

AngleConstant profile_equation_constant(const ProfileSurface& surface, ProfileEquation eq) {
  Eigen::MatrixXd c = surface.angle + (surface.m - 2) * surface.arg_z1;
  if (eq == ProfileEquation::Translator) c += surface.z2.imag();
  return constant_of(c);
}

namespace {

struct Stencil {
  std::array<double, 5> offsets;
  std::array<double, 5> weights;
};

// fourth-order first-derivative stencils, shifted to stay inside [lo, hi]
Stencil stencil_for(double s, double h, double lo, double hi) {
  if (s - 2 * h >= lo && s + 2 * h <= hi)
    return {{-2 * h, -h, 0, h, 2 * h}, {1 / (12 * h), -8 / (12 * h), 0, 8 / (12 * h), -1 / (12 * h)}};
  if (s - 2 * h < lo)
    return {{0, h, 2 * h, 3 * h, 4 * h},
            {-25 / (12 * h), 48 / (12 * h), -36 / (12 * h), 16 / (12 * h), -3 / (12 * h)}};
  return {{0, -h, -2 * h, -3 * h, -4 * h},
          {25 / (12 * h), -48 / (12 * h), 36 / (12 * h), -16 / (12 * h), 3 / (12 * h)}};
}

std::vector<std::array<CurveState, 5>> stencil_states(const SampledCurve& c, double h,
                                                      std::vector<Stencil>& stencils) {
  std::vector<std::array<CurveState, 5>> out(c.size());
  stencils.resize(c.size());
  parallel_for(c.size(), [&](Index i) {
    stencils[i] = stencil_for(c.params(i), h, c.s_min(), c.s_max());
    for (int k = 0; k < 5; ++k) out[i][k] = evaluate(c, c.params(i) + stencils[i].offsets[k]);
  });
  return out;
}

double psi(const CurveState& g, const CurveState& xi) {
  double g2 = std::norm(g.point), x2 = std::norm(xi.point);
  return -0.5 * (g2 - x2) * (g.beta - xi.beta) + g.beta_tilde + xi.beta_tilde;
}

}  // namespace

double check_exactness(const ProfileSurface& surface, double h) {
  std::vector<Stencil> sx, sy;
  auto gx = stencil_states(surface.gamma, h, sx);
  auto gy = stencil_states(surface.xi, h, sy);
  const Index nx = surface.rows(), ny = surface.cols();
  Eigen::VectorXd row_worst = Eigen::VectorXd::Zero(nx);
  parallel_for(nx, [&](Index i) {
    CurveState g = surface.gamma.state(i);
    for (Index j = 0; j < ny; ++j) {
      CurveState x = surface.xi.state(j);
      ProfilePoint p = profile_point(g, x);
      double dpx = 0.0, dpy = 0.0;
      for (int k = 0; k < 5; ++k) {
        dpx += sx[i].weights[k] * psi(gx[i][k], x);
        dpy += sy[j].weights[k] * psi(g, gy[j][k]);
      }
      double ex = liouville(p.z, p.dx) - dpx;
      double ey = liouville(p.z, p.dy) - dpy;
      row_worst(i) = std::max(row_worst(i), std::hypot(ex, ey));
    }
  });
  return row_worst.maxCoeff();
}

namespace {

SampledCurve lawlor_curve(int m, double scale, double phase, Index n, double fraction) {
  Sampling s;
  s.count = n;
  s.angle_fraction = fraction;
  return make_lawlor(m, scale, phase, s);
}

SampledCurve shrinker_curve(const FamilyParams& p, Index n) {
  Sampling s;
  s.count = n;
  s.periods = p.periods;
  return find_shrinker_profile(p.soliton_scale, p.winding.p, p.winding.q, p.m, 1e-9, s);
}

SampledCurve expander_curve(const FamilyParams& p, Index n) {
  Sampling s;
  s.count = n;
  s.angle_fraction = p.angle_fraction;
  return find_expander_profile(p.soliton_scale, p.alpha, p.m, 1e-12, s);
}

ProfileSurface assemble(FamilyTag tag, const FamilyParams& p, double phase) {
  const double L = p.line_extent;
  const double k = p.soliton_scale;
  SampledCurve gamma, xi;
  switch (tag) {
    case FamilyTag::A_plane:
      gamma = make_line(p.m, 0.0, phase, {-L, L}, p.nx);
      xi = make_line(p.m, 0.0, 0.0, {-L, L}, p.ny);
      break;
    case FamilyTag::B_lawlor_line:
      gamma = lawlor_curve(p.m, p.mu, phase, p.nx, p.angle_fraction);
      xi = make_line(p.m, 0.0, 0.0, {-L, L}, p.ny);
      break;
    case FamilyTag::C_lawlor_lawlor:
      gamma = lawlor_curve(p.m, p.mu1, phase, p.nx, p.angle_fraction);
      xi = lawlor_curve(p.m, p.mu2, 0.0, p.ny, p.angle_fraction);
      break;
    case FamilyTag::D_line_shrinker:
      gamma = rotated(shrinker_curve(p, p.nx), phase);
      xi = make_line(p.m, k, 0.0, {-L, L}, p.ny);
      break;
    case FamilyTag::E_expander_line:
      gamma = make_line(p.m, -k, phase, {-L, L}, p.nx);
      xi = expander_curve(p, p.ny);
      break;
    case FamilyTag::F_expander_shrinker:
      gamma = rotated(shrinker_curve(p, p.nx), phase);
      xi = expander_curve(p, p.ny);
      break;
  }
  ProfileSurface s = build_profile(gamma, xi);
  s.tag = tag;
  return s;
}

}  // namespace

ProfileSurface make_family(FamilyTag tag, const FamilyParams& params) {
  if (params.m < 2) throw Error(ErrorCode::InconsistentParams, "m must be at least 2");
  if (params.nx < 2 || params.ny < 2) throw Error(ErrorCode::InconsistentParams, "grid needs at least 2x2 samples");
  if (!(params.soliton_scale > 0.0)) throw Error(ErrorCode::InconsistentParams, "soliton scale must be positive");
  if (!(params.mu > 0.0 && params.mu1 > 0.0 && params.mu2 > 0.0))
    throw Error(ErrorCode::InconsistentParams, "lawlor scales must be positive");
  if (!(params.line_extent > 0.0)) throw Error(ErrorCode::InconsistentParams, "line extent must be positive");
  if (!(params.angle_fraction > 0.0 && params.angle_fraction < 1.0))
    throw Error(ErrorCode::InconsistentParams, "angle fraction must lie in (0, 1)");
  ProfileSurface s = assemble(tag, params, params.phase);
  if (!params.normalize_phase) return s;
  auto eq = is_translator_family(tag) ? ProfileEquation::Translator : ProfileEquation::SpecialLagrangian;
  double c = profile_equation_constant(s, eq).constant;
  if (params.m == 2) return s;
  return assemble(tag, params, params.phase - c / (params.m - 1));
}

ProfileSurface recentered(const ProfileSurface& surface) {
  ProfileSurface s = surface;
  double c = profile_equation_constant(surface, ProfileEquation::Translator).constant;
  s.z2.array() -= cplx(0.0, c);
  return s;
}

}  // namespace soliton
