#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "soliton/errors.hpp"

namespace soliton {

struct StepControl {
  double rtol = 1e-12;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_min = 1e-13;
  double h_max = 0.05;
  long max_steps = 5'000'000;
};

// Dormand-Prince 5(4) with embedded error control. Integrates y from t0 to t1
// (either direction) and lands exactly on t1. `guard(y)` may throw.
template <int N, typename Rhs, typename Guard>
Eigen::Matrix<double, N, 1> dopri5(Rhs&& f, Eigen::Matrix<double, N, 1> y, double t0, double t1,
                                   const StepControl& ctl, Guard&& guard) {
  using Vec = Eigen::Matrix<double, N, 1>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double span = t1 - t0;
  if (span == 0.0) return y;
  double dir = span > 0 ? 1.0 : -1.0;
  double h = std::min(ctl.h_init, std::abs(span));
  double t = t0;
  Vec k1 = f(t, y);
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > ctl.max_steps) throw Error(ErrorCode::StepFailure, "step budget exhausted");
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    double hs = dir * h;
    Vec k2 = f(t + c2 * hs, y + hs * (a21 * k1));
    Vec k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    Vec k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    Vec k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vec k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Vec k7 = f(t + hs, y_new);
    Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    Vec scale = (ctl.atol + ctl.rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).matrix();
    double en = (err.cwiseQuotient(scale)).cwiseAbs().maxCoeff();
    if (!std::isfinite(en)) en = 1e10;
    if (en <= 1.0) {
      t = last ? t1 : t + hs;
      y = y_new;
      k1 = k7;
      guard(y);
      double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h = std::min(h * fac, ctl.h_max);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.25));
      if (h < ctl.h_min) throw Error(ErrorCode::StepFailure, "tolerance unreachable");
    }
  }
  return y;
}

}  // namespace soliton
