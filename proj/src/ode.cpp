#include "soliton/curves.hpp"

namespace soliton {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// state: (x, y, tangent angle, beta, beta tilde, polar angle)
Vec6 curve_rhs(const Vec6& y, int m, double a) {
  double r2 = y(0) * y(0) + y(1) * y(1);
  double tx = std::cos(y(2));
  double ty = std::sin(y(2));
  double db = y(0) * ty - y(1) * tx;
  double c = (m - 2) / r2 + a;
  Vec6 d;
  d << tx, ty, -c * db, db, r2 * db, db / r2;
  return d;
}

namespace {

Vec6 pack(const CurveState& st) {
  Vec6 y;
  y << st.point.real(), st.point.imag(), st.tangent_angle, st.beta, st.beta_tilde, st.polar_angle;
  return y;
}

}  // namespace

CurveState integrate_state(const CurveState& start, double s_end, int m, double a,
                           const OdeOptions& opts) {
  StepControl ctl = opts.control;
  ctl.rtol = opts.tol;
  ctl.atol = opts.tol;
  double floor2 = opts.floor * opts.floor;
  auto rhs = [m, a](double, const Vec6& y) { return curve_rhs(y, m, a); };
  auto guard = [floor2](const Vec6& y) {
    if (y(0) * y(0) + y(1) * y(1) < floor2)
      throw Error(ErrorCode::Singularity, "curve reached the origin floor");
  };
  Vec6 y = dopri5<6>(rhs, pack(start), start.s, s_end, ctl, guard);
  CurveState out;
  out.s = s_end;
  out.point = {y(0), y(1)};
  out.tangent_angle = y(2);
  out.beta = y(3);
  out.beta_tilde = y(4);
  out.polar_angle = y(5);
  return out;
}

}  // namespace soliton
