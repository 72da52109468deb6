#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "soliton/profile.hpp"

namespace soliton {

enum class GroupKind { SpecialOrthogonal, MaximalTorus };

const char* to_string(GroupKind kind);
GroupKind group_kind_from_string(const std::string& name);  // "so" | "torus"

struct GroupActionSpec {
  GroupKind kind = GroupKind::SpecialOrthogonal;
  int m = 3;
  int cyclic_order = 2;
  // torus only: put z1 / sqrt(m-1) in each slot so P x C -> C^m is a Kaehler isometry.
  // The plain (z1, ..., z1, z2) image is only Lagrangian after this rescaling.
  bool isometric_psi = false;

  static GroupActionSpec make(GroupKind kind, int m, bool isometric_psi = false);
  void validate() const;
  int orbit_dimension() const { return m - 2; }
};

// Element of G acting on C^m, trivially on the last coordinate.
struct GroupElement {
  Eigen::MatrixXcd matrix;

  Eigen::VectorXcd operator*(const Eigen::VectorXcd& z) const { return matrix * z; }
};

GroupElement identity_element(const GroupActionSpec& group);

// mu(z') as an element of the Lie algebra (skew-Hermitian (m-1)x(m-1) matrix)
Eigen::MatrixXcd standard_moment_map(const GroupActionSpec& group, const Eigen::VectorXcd& z_prime);
double moment_map_norm(const GroupActionSpec& group, const Eigen::VectorXcd& z_prime);

Eigen::VectorXcd psi_embed(const GroupActionSpec& group, const Eigen::Vector2cd& z);
// complex-linear part of psi_embed applied to a tangent vector
Eigen::VectorXcd psi_push(const GroupActionSpec& group, const Eigen::Vector2cd& v);

// Lie algebra basis transverse to the isotropy of the base line, as m x m matrices.
std::vector<Eigen::MatrixXcd> orbit_basis(const GroupActionSpec& group);
// fundamental vector fields at g . psi(w): columns (g X_j g^-1)(g psi(w))
Eigen::MatrixXcd orbit_fields(const GroupActionSpec& group, const GroupElement& g,
                              const Eigen::VectorXcd& point);

// Phase eta with (m-1) eta = -arg Omega(X_1 V, ..., X_{m-2} V, V, e_m) mod pi, V the base direction of psi.
double phi_phase(const GroupActionSpec& group);

std::vector<GroupElement> sample_group(const GroupActionSpec& group, int n, std::uint64_t seed);

struct OrbitSampleSet {
  ProfileSurface surface;
  GroupActionSpec group;
  std::vector<GroupElement> elements;
  // points[e] is m x (rows * cols), column i + rows * j
  std::vector<Eigen::MatrixXcd> points;
  double moment_residual = 0.0;

  Eigen::VectorXcd point(std::size_t e, Index i, Index j) const {
    return points[e].col(i + surface.rows() * j);
  }
};

OrbitSampleSet lift_orbit(const ProfileSurface& surface, const GroupActionSpec& group,
                          const std::vector<GroupElement>& elements);

// k copies of the profile with z1 rotated by e^{2 pi i j / k}
std::vector<ProfileSurface> cyclic_orbit(const ProfileSurface& surface, const GroupActionSpec& group);
std::vector<ProfileSurface> cyclic_orbit(const ProfileSurface& surface, int k);

// Uniform doubles in [0, 1) built from the raw engine output, so streams do not
// depend on the standard library's distribution implementation.
class Random {
public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace soliton
