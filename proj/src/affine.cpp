#include "soliton/affine.hpp"

#include <algorithm>

#include "soliton/errors.hpp"
#include "soliton/groups.hpp"
#include "soliton/parallel.hpp"
#include "soliton/verify.hpp"

namespace soliton {

Eigen::Vector3d mu_affine(const Vec3c& z) {
  double x3 = z(2).real();
  return {x3 - 0.5 * std::norm(z(0)), x3 - 0.5 * std::norm(z(1)), std::imag(z(0) * z(1) * std::exp(z(2)))};
}

Eigen::Matrix<double, 3, 6> mu_gradient(const Vec3c& z) {
  Eigen::Matrix<double, 3, 6> g = Eigen::Matrix<double, 3, 6>::Zero();
  g(0, 0) = -z(0).real();
  g(0, 1) = -z(0).imag();
  g(0, 4) = 1.0;
  g(1, 2) = -z(1).real();
  g(1, 3) = -z(1).imag();
  g(1, 4) = 1.0;
  // Im h for holomorphic h: d_x = Im h', d_y = Re h'
  cplx e = std::exp(z(2));
  cplx h[3] = {z(1) * e, z(0) * e, z(0) * z(1) * e};
  for (int k = 0; k < 3; ++k) {
    g(2, 2 * k) = h[k].imag();
    g(2, 2 * k + 1) = h[k].real();
  }
  return g;
}

double poisson_bracket(int j, int k, const Vec3c& z) {
  if (j < 1 || j > 3 || k < 1 || k > 3) throw Error(ErrorCode::Precondition, "bracket indices are 1..3");
  if (j == k) return 0.0;
  auto g = mu_gradient(z);
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    s += g(j - 1, 2 * c) * g(k - 1, 2 * c + 1) - g(j - 1, 2 * c + 1) * g(k - 1, 2 * c);
  return s;
}

Eigen::Matrix3cd moment_matrix(const Vec3c& z) {
  auto g = mu_gradient(z);
  Eigen::Matrix3cd M;
  // 2i d/dzbar = i (d_x + i d_y)
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) M(j, k) = cplx(-g(j, 2 * k + 1), g(j, 2 * k));
  return M;
}

cplx det_M_expanded(const Vec3c& z) {
  double r1 = std::norm(z(0)), r2 = std::norm(z(1));
  return std::exp(std::conj(z(2))) * (r1 + r2 + r1 * r2);
}

cplx det_M_closed_form(const Vec3c& z) { return det_M_expanded(z) / (8.0 * I); }

DetMReport det_M(const Vec3c& z) {
  DetMReport r;
  r.matrix = moment_matrix(z).determinant();
  r.closed_form = det_M_closed_form(z);
  r.expanded = det_M_expanded(z);
  r.degenerate = z(0) == 0.0 && z(1) == 0.0;
  auto rel = [](cplx x, cplx ref) {
    if (ref == 0.0) return x == 0.0 ? 0.0 : std::abs(x);
    return std::abs(x - ref) / std::abs(ref);
  };
  r.relative_error = rel(r.matrix, r.closed_form);
  r.expanded_relative_error = rel(r.matrix, r.expanded);
  return r;
}

double closed_form_angle_defect(const Vec3c& z) {
  return circle_distance(std::arg(det_M_closed_form(z)) + z(2).imag(), -pi / 2, 2.0 * pi);
}

Vec3c AffineGroupElement::apply(const Vec3c& z) const {
  return {std::polar(1.0, theta1) * z(0), std::polar(1.0, theta2) * z(1), z(2) - I * (theta1 + theta2)};
}

Eigen::Matrix3cd AffineGroupElement::linear() const {
  Eigen::Matrix3cd A = Eigen::Matrix3cd::Identity();
  A(0, 0) = std::polar(1.0, theta1);
  A(1, 1) = std::polar(1.0, theta2);
  return A;
}

Vec3c AffineGroupElement::translation() const { return {0.0, 0.0, -I * (theta1 + theta2)}; }

bool preserves_omega_f(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& t, double tol) {
  const Index m = A.rows();
  if (m < 1 || A.cols() != m || t.size() != m) return false;
  if ((A.adjoint() * A - Eigen::MatrixXcd::Identity(m, m)).norm() > tol) return false;
  Eigen::RowVectorXcd last = Eigen::RowVectorXcd::Zero(m);
  last(m - 1) = 1.0;
  if ((A.row(m - 1) - last).norm() > tol) return false;
  return std::abs(std::exp(t(m - 1)) * A.determinant() - 1.0) <= tol;
}

double omega_f_defect(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& t, int samples, std::uint64_t seed) {
  const Index m = A.rows();
  Random rng(seed);
  cplx det = A.determinant();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXcd z(m);
    for (Index k = 0; k < m; ++k) z(k) = cplx(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    Eigen::VectorXcd w = A * z + t;
    worst = std::max(worst, std::abs(std::exp(w(m - 1) - z(m - 1)) * det - 1.0));
  }
  return worst;
}

Vec3c fiber_point(double a, double b, double c, double r1, double phi1, double phi2, int sheet) {
  double r2sq = r1 * r1 - 2.0 * (b - a);
  if (r1 < 0.0 || r2sq < 0.0) throw Error(ErrorCode::Domain, "|z1|^2 - |z2|^2 must equal 2(b - a)");
  double r2 = std::sqrt(r2sq);
  cplx z1 = std::polar(r1, phi1), z2 = std::polar(r2, phi2);
  double prod = r1 * r2;
  if (prod < 1e-8) throw Error(ErrorCode::Domain, "too close to z1 z2 = 0");
  double re3 = 0.5 * (a + b) + 0.25 * (r1 * r1 + r2sq);
  double s = c * std::exp(-re3) / prod;
  if (s < -1.0 || s > 1.0) throw Error(ErrorCode::Domain, "arcsin argument outside [-1, 1]");
  double theta = std::arg(z1 * z2) - std::asin(s) + 2.0 * pi * sheet;
  return {z1, z2, cplx(re3, -theta)};
}

Vec3c singular_fiber_point(double a, double r, double theta1, double theta2) {
  return {std::polar(r, theta1), std::polar(r, theta2), cplx(a + 0.5 * r * r, -(theta1 + theta2))};
}

AffineFiber sample_fiber(double a, double b, double c, const FiberGrid& grid) {
  if (grid.radial < 1 || grid.angular < 1) throw Error(ErrorCode::Precondition, "empty fiber grid");
  AffineFiber f;
  f.a = a;
  f.b = b;
  f.c = c;
  f.grid = grid;
  double r_lo = std::sqrt(std::max(0.0, 2.0 * (b - a)));
  if (grid.r1_max <= r_lo) throw Error(ErrorCode::Precondition, "r1_max below the base circle");
  std::vector<Eigen::Vector3d> base;
  for (Index i = 0; i < grid.radial; ++i) {
    double r1 = r_lo + (grid.r1_max - r_lo) * double(i + 1) / double(grid.radial);
    for (Index j = 0; j < grid.angular; ++j)
      for (Index k = 0; k < grid.angular; ++k) {
        double p1 = -pi + 2.0 * pi * double(j) / double(grid.angular);
        double p2 = -pi + 2.0 * pi * double(k) / double(grid.angular);
        try {
          Vec3c z = fiber_point(a, b, c, r1, p1, p2, grid.sheet);
          f.samples.push_back(z);
          f.angle.push_back(-z(2).imag());
          base.emplace_back(r1, p1, p2);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::Domain) throw;
          ++f.discarded;
        }
      }
  }
  if (f.samples.empty()) throw Error(ErrorCode::EmptyFiber, "no grid point admits the arcsin");
  f.base_grid.resize(Index(base.size()), 3);
  for (std::size_t n = 0; n < base.size(); ++n) f.base_grid.row(Index(n)) = base[n].transpose();
  Eigen::Vector3d level(a, b, c);
  for (const auto& z : f.samples) f.level_residual = std::max(f.level_residual, (mu_affine(z) - level).norm());
  return f;
}

namespace {

Eigen::Matrix3cd fiber_frame(const AffineFiber& f, Index n) {
  Eigen::Vector3d u = f.base_grid.row(n).transpose();
  Eigen::Matrix3cd frame;
  for (int d = 0; d < 3; ++d) {
    double h = 1e-6 * std::max(1.0, std::abs(u(d)));
    Eigen::Vector3d lo = u, hi = u;
    lo(d) -= h;
    hi(d) += h;
    Vec3c zl = fiber_point(f.a, f.b, f.c, lo(0), lo(1), lo(2), f.grid.sheet);
    Vec3c zh = fiber_point(f.a, f.b, f.c, hi(0), hi(1), hi(2), f.grid.sheet);
    Vec3c dz = zh - zl;
    // the principal arg jumps by 2 pi across the cut
    dz(2) = cplx(dz(2).real(), std::remainder(dz(2).imag(), 2.0 * pi));
    frame.col(d) = dz / (2.0 * h);
  }
  return frame;
}

}  // namespace

FiberAngleReport check_fiber_translator(const AffineFiber& fiber, double target) {
  const Index n = Index(fiber.samples.size());
  std::vector<double> values(std::size_t(n), 0.0);
  parallel_for(n, [&](Index k) {
    const Vec3c& z = fiber.samples[std::size_t(k)];
    if (std::abs(z(0) * z(1)) < 1e-8) throw Error(ErrorCode::DegenerateFrame, "sample on the singular locus");
    values[std::size_t(k)] = full_lagrangian_angle(fiber_frame(fiber, k)) + z(2).imag();
  });
  FiberAngleReport r;
  r.samples = values.size();
  r.constant = wrap(circular_mean(values, pi), pi);
  for (double v : values) {
    r.deviation = std::max(r.deviation, circle_distance(v, target, 2.0 * pi));
    r.spread = std::max(r.spread, circle_distance(v, r.constant, pi));
  }
  return r;
}

AffineBatchReport affine_batch(std::size_t n, std::uint64_t seed) {
  std::vector<Vec3c> pts(n);
  std::vector<AffineGroupElement> gs(n);
  Random rng(seed);
  for (std::size_t k = 0; k < n; ++k) {
    for (int c = 0; c < 3; ++c) pts[k](c) = cplx(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    gs[k] = {rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
  }
  std::vector<AffineBatchReport> per(n);
  parallel_for(Index(n), [&](Index k) {
    const Vec3c& z = pts[std::size_t(k)];
    AffineBatchReport& r = per[std::size_t(k)];
    for (int j = 1; j <= 3; ++j)
      for (int l = j + 1; l <= 3; ++l) r.bracket = std::max(r.bracket, std::abs(poisson_bracket(j, l, z)));
    DetMReport d = det_M(z);
    r.det_relative_error = d.relative_error;
    r.det_expanded_error = d.expanded_relative_error;
    r.closed_form_angle = closed_form_angle_defect(z);
    r.matrix_angle = circle_distance(std::arg(d.matrix) + z(2).imag(), -pi / 2, 2.0 * pi);
    r.invariance = (mu_affine(gs[std::size_t(k)].apply(z)) - mu_affine(z)).cwiseAbs().maxCoeff();
  });
  AffineBatchReport out;
  out.points = n;
  for (const auto& r : per) {
    out.bracket = std::max(out.bracket, r.bracket);
    out.det_relative_error = std::max(out.det_relative_error, r.det_relative_error);
    out.det_expanded_error = std::max(out.det_expanded_error, r.det_expanded_error);
    out.closed_form_angle = std::max(out.closed_form_angle, r.closed_form_angle);
    out.matrix_angle = std::max(out.matrix_angle, r.matrix_angle);
    out.invariance = std::max(out.invariance, r.invariance);
  }
  return out;
}

}  // namespace soliton
