#include "soliton/groups.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "soliton/errors.hpp"
#include "soliton/parallel.hpp"

namespace soliton {

const char* to_string(GroupKind kind) {
  return kind == GroupKind::SpecialOrthogonal ? "so" : "torus";
}

GroupKind group_kind_from_string(const std::string& name) {
  if (name == "so" || name == "SO" || name == "special_orthogonal") return GroupKind::SpecialOrthogonal;
  if (name == "torus" || name == "T" || name == "maximal_torus") return GroupKind::MaximalTorus;
  throw Error(ErrorCode::Config, "unknown group '" + name + "' (expected so or torus)");
}

GroupActionSpec GroupActionSpec::make(GroupKind kind, int m, bool isometric_psi) {
  GroupActionSpec g;
  g.kind = kind;
  g.m = m;
  g.isometric_psi = isometric_psi;
  g.cyclic_order = kind == GroupKind::SpecialOrthogonal ? 2 : m - 1;
  g.validate();
  return g;
}

void GroupActionSpec::validate() const {
  if (m < 2) throw Error(ErrorCode::InconsistentParams, "m must be at least 2");
  int expected = kind == GroupKind::SpecialOrthogonal ? 2 : m - 1;
  if (cyclic_order != expected) throw Error(ErrorCode::InconsistentParams, "cyclic order does not match the group");
  if ((2 * (m - 1)) % cyclic_order != 0)
    throw Error(ErrorCode::InconsistentParams, "cyclic order must divide 2(m-1)");
}

GroupElement identity_element(const GroupActionSpec& group) {
  return {Eigen::MatrixXcd::Identity(group.m, group.m)};
}

Eigen::MatrixXcd standard_moment_map(const GroupActionSpec& group, const Eigen::VectorXcd& z) {
  const Index n = z.size();
  if (n != group.m - 1) throw Error(ErrorCode::Precondition, "z' must have m-1 entries");
  Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(n, n);
  if (group.kind == GroupKind::SpecialOrthogonal) {
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) mu(j, k) = 0.5 * std::imag(z(j) * std::conj(z(k)));
  } else {
    double mean = z.squaredNorm() / double(n);
    for (Index j = 0; j < n; ++j) mu(j, j) = -0.5 * I * (std::norm(z(j)) - mean);
  }
  return mu;
}

double moment_map_norm(const GroupActionSpec& group, const Eigen::VectorXcd& z) {
  const Index n = z.size();
  double acc = 0.0;
  if (group.kind == GroupKind::SpecialOrthogonal) {
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double v = 0.5 * std::imag(z(j) * std::conj(z(k)));
        acc += v * v;
      }
  } else {
    double mean = z.squaredNorm() / double(n);
    for (Index j = 0; j < n; ++j) {
      double v = 0.5 * (std::norm(z(j)) - mean);
      acc += v * v;
    }
  }
  return std::sqrt(acc);
}

Eigen::VectorXcd psi_push(const GroupActionSpec& group, const Eigen::Vector2cd& v) {
  const int m = group.m;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
  if (group.kind == GroupKind::SpecialOrthogonal)
    out(0) = v(0);
  else
    out.head(m - 1).setConstant(group.isometric_psi ? v(0) / std::sqrt(double(m - 1)) : v(0));
  out(m - 1) = v(1);
  return out;
}

Eigen::VectorXcd psi_embed(const GroupActionSpec& group, const Eigen::Vector2cd& z) {
  return psi_push(group, z);
}

std::vector<Eigen::MatrixXcd> orbit_basis(const GroupActionSpec& group) {
  const int m = group.m;
  std::vector<Eigen::MatrixXcd> basis;
  for (int j = 0; j < m - 2; ++j) {
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(m, m);
    if (group.kind == GroupKind::SpecialOrthogonal) {
      X(j + 1, 0) = 1.0;
      X(0, j + 1) = -1.0;
    } else {
      X(j, j) = I;
      X(j + 1, j + 1) = -I;
    }
    basis.push_back(std::move(X));
  }
  return basis;
}

Eigen::MatrixXcd orbit_fields(const GroupActionSpec& group, const GroupElement& g,
                              const Eigen::VectorXcd& point) {
  auto basis = orbit_basis(group);
  Eigen::MatrixXcd cols(group.m, Index(basis.size()));
  Eigen::VectorXcd base = g.matrix.adjoint() * point;
  for (std::size_t j = 0; j < basis.size(); ++j) cols.col(Index(j)) = g.matrix * (basis[j] * base);
  return cols;
}

double phi_phase(const GroupActionSpec& group) {
  const int m = group.m;
  Eigen::VectorXcd V = psi_push(group, Eigen::Vector2cd(1.0, 0.0));
  Eigen::MatrixXcd frame(m, m);
  auto basis = orbit_basis(group);
  for (int j = 0; j < m - 2; ++j) frame.col(j) = basis[j] * V;
  frame.col(m - 2) = V;
  frame.col(m - 1) = Eigen::VectorXcd::Unit(m, m - 1);
  return -std::arg(frame.determinant()) / (m - 1);
}

std::vector<GroupElement> sample_group(const GroupActionSpec& group, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::Precondition, "need at least one element");
  group.validate();
  const int m = group.m;
  std::vector<GroupElement> out{identity_element(group)};
  Random rng(seed);
  for (int e = 1; e < n; ++e) {
    GroupElement g = identity_element(group);
    if (group.kind == GroupKind::SpecialOrthogonal) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m - 1, m - 1);
      for (int j = 0; j < m - 1; ++j)
        for (int k = j + 1; k < m - 1; ++k) {
          A(j, k) = rng.uniform(-pi, pi);
          A(k, j) = -A(j, k);
        }
      Eigen::MatrixXd R = A.exp();
      g.matrix.topLeftCorner(m - 1, m - 1) = R.cast<cplx>();
    } else {
      double total = 0.0;
      for (int j = 0; j < m - 2; ++j) {
        double t = rng.uniform(-pi, pi);
        total += t;
        g.matrix(j, j) = std::polar(1.0, t);
      }
      g.matrix(m - 2, m - 2) = std::polar(1.0, -total);
    }
    out.push_back(std::move(g));
  }
  return out;
}

OrbitSampleSet lift_orbit(const ProfileSurface& surface, const GroupActionSpec& group,
                          const std::vector<GroupElement>& elements) {
  group.validate();
  if (group.m != surface.m) throw Error(ErrorCode::InconsistentParams, "group and surface disagree on m");
  OrbitSampleSet set;
  set.surface = surface;
  set.group = group;
  set.elements = elements;
  const Index rows = surface.rows(), cols = surface.cols();
  set.points.assign(elements.size(), Eigen::MatrixXcd(group.m, rows * cols));
  std::vector<double> residual(elements.size(), 0.0);
  parallel_for(Index(elements.size()), [&](Index e) {
    const auto& g = elements[e].matrix;
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) {
        Eigen::VectorXcd z = g * psi_embed(group, surface.point(i, j));
        residual[e] = std::max(residual[e], moment_map_norm(group, z.head(group.m - 1)));
        set.points[e].col(i + rows * j) = z;
      }
  });
  for (double r : residual) set.moment_residual = std::max(set.moment_residual, r);
  return set;
}

std::vector<ProfileSurface> cyclic_orbit(const ProfileSurface& surface, int k) {
  if (k < 1) throw Error(ErrorCode::Precondition, "cyclic order must be positive");
  std::vector<ProfileSurface> out;
  for (int j = 0; j < k; ++j) {
    if (j == 0) {
      out.push_back(surface);
      continue;
    }
    ProfileSurface s = build_profile(rotated(surface.gamma, 2.0 * pi * j / k), surface.xi);
    s.tag = surface.tag;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ProfileSurface> cyclic_orbit(const ProfileSurface& surface, const GroupActionSpec& group) {
  return cyclic_orbit(surface, group.cyclic_order);
}

}  // namespace soliton
