#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "soliton/geometry.hpp"

namespace soliton {

using Vec3c = Eigen::Vector3cd;

// (Re z3 - |z1|^2/2, Re z3 - |z2|^2/2, Im(z1 z2 e^{z3}))
Eigen::Vector3d mu_affine(const Vec3c& z);

// d mu_j in real coordinates, rows j, columns (x1, y1, x2, y2, x3, y3)
Eigen::Matrix<double, 3, 6> mu_gradient(const Vec3c& z);

// {mu_j, mu_k} = sum_k (d_x f d_y g - d_y f d_x g), indices 1..3
double poisson_bracket(int j, int k, const Vec3c& z);

// M_jk = 2i d mu_j / d zbar_k, row j is J grad mu_j as a complex vector
Eigen::Matrix3cd moment_matrix(const Vec3c& z);

// e^{conj z3} (|z1|^2 + |z2|^2 + |z1|^2 |z2|^2) / (8i), the quoted closed form
cplx det_M_closed_form(const Vec3c& z);
// the same expression without the 1/(8i)
cplx det_M_expanded(const Vec3c& z);

struct DetMReport {
  cplx matrix = 0.0;
  cplx closed_form = 0.0;
  cplx expanded = 0.0;
  double relative_error = 0.0;           // matrix vs closed form
  double expanded_relative_error = 0.0;  // matrix vs expanded
  bool degenerate = false;               // (z1, z2) = (0, 0)
};

DetMReport det_M(const Vec3c& z);

// mod 2 pi distance of arg(closed form) + Im z3 from -pi/2
double closed_form_angle_defect(const Vec3c& z);

struct AffineGroupElement {
  double theta1 = 0.0;
  double theta2 = 0.0;

  Vec3c apply(const Vec3c& z) const;
  Eigen::Matrix3cd linear() const;
  Vec3c translation() const;
};

// (A, t) preserves Omega_f = e^{z_m} dz_1 ^ ... ^ dz_m: A unitary with last row e_m
// and e^{t_m} det A = 1
bool preserves_omega_f(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& t, double tol = 1e-10);
// max |e^{(Az + t)_m} det A - e^{z_m}| / |e^{z_m}| over random z
double omega_f_defect(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& t, int samples = 64,
                      std::uint64_t seed = 1);

struct FiberGrid {
  Index radial = 24;
  Index angular = 24;  // per angle
  double r1_max = 3.0;
  int sheet = 0;  // branch of the multivalued arg, adds 2 pi sheet to theta
};

struct AffineFiber {
  double a = 0.0, b = 0.0, c = 0.0;
  FiberGrid grid;
  std::vector<Vec3c> samples;
  Eigen::MatrixXd base_grid;  // n x 3: r1, phi1, phi2
  std::vector<double> angle;  // theta(z1, z2), so z3 = ... - i theta
  std::size_t discarded = 0;
  double level_residual = 0.0;

  std::size_t size() const { return samples.size(); }
};

// point of L_{a,b,c} over (r1 e^{i phi1}, r2 e^{i phi2}); throws Domain off the arcsin range
Vec3c fiber_point(double a, double b, double c, double r1, double phi1, double phi2, int sheet = 0);
// (r e^{i t1}, r e^{i t2}, a + r^2/2 - i (t1 + t2))
Vec3c singular_fiber_point(double a, double r, double theta1, double theta2);

AffineFiber sample_fiber(double a, double b, double c, const FiberGrid& grid = {});

struct FiberAngleReport {
  double deviation = 0.0;  // max mod 2 pi distance of theta + Im z3 from the target
  double constant = 0.0;   // circular mean of theta + Im z3, mod pi
  double spread = 0.0;     // max mod pi distance from that mean
  std::size_t samples = 0;
};

// theta from arg det of finite-difference frames in the (r1, phi1, phi2) chart
FiberAngleReport check_fiber_translator(const AffineFiber& fiber, double target = -pi / 2);

struct AffineBatchReport {
  std::size_t points = 0;
  double bracket = 0.0;
  double det_relative_error = 0.0;
  double det_expanded_error = 0.0;
  double closed_form_angle = 0.0;
  double matrix_angle = 0.0;  // mod 2 pi distance of arg det M + Im z3 from -pi/2
  double invariance = 0.0;
};

AffineBatchReport affine_batch(std::size_t n, std::uint64_t seed);

}  // namespace soliton
