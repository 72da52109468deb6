#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace soliton {

using cplx = std::complex<double>;
using Eigen::Index;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Distance on R / period Z, minimal representative in [0, period/2].
inline double circle_distance(double a, double b, double period = pi) {
  double d = std::remainder(a - b, period);
  return std::abs(d);
}

// Representative of x in (-period/2, period/2].
inline double wrap(double x, double period = pi) {
  double r = std::remainder(x, period);
  if (r <= -0.5 * period) r += period;
  return r;
}

// Shift `next` by multiples of period so it lies within period/2 of `prev`.
inline double unwrap_step(double prev, double next, double period = 2.0 * pi) {
  return prev + std::remainder(next - prev, period);
}

// Circular mean on R / period Z.
template <typename Range>
double circular_mean(const Range& values, double period = pi) {
  cplx acc = 0.0;
  for (double v : values) acc += std::polar(1.0, 2.0 * pi * v / period);
  return std::arg(acc) * period / (2.0 * pi);
}

// omega_0(u, v) = sum Im(conj(u_k) v_k)
template <typename DerivedU, typename DerivedV>
auto omega0(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  return (u.conjugate().cwiseProduct(v)).sum().imag();
}

// lambda_z(v) = sum Im(conj(z_k) v_k), so d lambda = 2 omega_0
template <typename DerivedZ, typename DerivedV>
auto liouville(const Eigen::MatrixBase<DerivedZ>& z, const Eigen::MatrixBase<DerivedV>& v) {
  return (z.conjugate().cwiseProduct(v)).sum().imag();
}

// Metric g_0(u, v) = Re <u, v>.
template <typename DerivedU, typename DerivedV>
auto metric0(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  return (u.conjugate().cwiseProduct(v)).sum().real();
}

// theta = arg det of the frame, columns are tangent vectors.
template <typename Derived>
double frame_angle(const Eigen::MatrixBase<Derived>& frame) {
  return std::arg(frame.determinant());
}

}  // namespace soliton
