#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "soliton/curves.hpp"

namespace soliton {

enum class FamilyTag {
  A_plane,
  B_lawlor_line,
  C_lawlor_lawlor,
  D_line_shrinker,
  E_expander_line,
  F_expander_shrinker
};

const char* to_string(FamilyTag tag);
FamilyTag family_from_string(const std::string& name);  // "a" .. "f"
bool is_translator_family(FamilyTag tag);

// F(x, y) = (gamma(x) xi(y), (|xi|^2 - |gamma|^2)/2 + i(beta_xi - beta_gamma)) and its first jet.
struct ProfilePoint {
  Eigen::Vector2cd z;
  Eigen::Vector2cd dx;
  Eigen::Vector2cd dy;
  double angle = 0.0;      // arg(gamma') + arg(xi'), lifted
  double primitive = 0.0;  // psi with F*lambda = d psi
  double arg_z1 = 0.0;     // polar angle of gamma plus polar angle of xi, lifted
};

ProfilePoint profile_point(const CurveState& g, const CurveState& xi);

struct ProfileSurface {
  SampledCurve gamma;
  SampledCurve xi;
  int m = 3;
  double a = 0.0;  // soliton constant of gamma
  double b = 0.0;  // soliton constant of xi
  std::optional<FamilyTag> tag;
  // rows follow gamma's samples (x), columns follow xi's samples (y)
  Eigen::MatrixXcd z1;
  Eigen::MatrixXcd z2;
  Eigen::MatrixXd angle;
  Eigen::MatrixXd primitive;
  Eigen::MatrixXd arg_z1;

  Index rows() const { return z1.rows(); }
  Index cols() const { return z1.cols(); }
  double x(Index i) const { return gamma.params(i); }
  double y(Index j) const { return xi.params(j); }
  Eigen::Vector2cd point(Index i, Index j) const { return {z1(i, j), z2(i, j)}; }
  ProfilePoint jet(Index i, Index j) const;
};

ProfilePoint evaluate(const ProfileSurface& surface, double x, double y);

ProfileSurface build_profile(const SampledCurve& gamma, const SampledCurve& xi);

double check_lagrangian(const ProfileSurface& surface);

struct AngleConstant {
  double constant = 0.0;   // circular mean mod pi
  double deviation = 0.0;  // max mod-pi distance to the constant
};

// c = angle + sign * (a beta_gamma + b beta_xi) + (m-2) arg(gamma xi).
AngleConstant angle_formula_constant(const ProfileSurface& surface, double sign = 1.0);
double check_angle_formula(const ProfileSurface& surface);

enum class ProfileEquation { SpecialLagrangian, Translator };

// SL: angle + (m-2) arg z1; translator: angle + (m-2) arg z1 + Im z2.
AngleConstant profile_equation_constant(const ProfileSurface& surface, ProfileEquation eq);

// max |F*lambda - d psi| with the derivative of psi from a five-point stencil of step h
double check_exactness(const ProfileSurface& surface, double h = 1e-3);

struct FamilyParams {
  int m = 3;
  double phase = 0.0;
  double mu = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double alpha = 1.1;
  double soliton_scale = 1.0;  // translator slots: a = -scale on gamma, b = +scale on xi
  Winding winding{1, 3};
  std::optional<int> periods;
  Index nx = 200;
  Index ny = 200;
  double line_extent = 2.0;
  double angle_fraction = 0.95;
  // choose the phase so the special Lagrangian constant vanishes mod pi
  bool normalize_phase = false;
};

ProfileSurface make_family(FamilyTag tag, const FamilyParams& params = {});

// translate along i e_2 so the translator constant is 0 mod pi
ProfileSurface recentered(const ProfileSurface& surface);

}  // namespace soliton
