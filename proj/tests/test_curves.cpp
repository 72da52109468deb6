#include <doctest.h>

#include "soliton/curves.hpp"
#include "soliton/errors.hpp"

using namespace soliton;

TEST_SUITE("curves") {

TEST_CASE("line closed form") {
  CHECK(std::abs(eval_line(2.0, 0.0) - cplx(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(eval_line(0.0, 1.234)) == 0.0);
  CHECK(std::abs(eval_line(1.0, pi / 2) - I) < 1e-15);

  auto line = make_line(3, 0.0, 0.3, {-2.0, 2.0}, 41);
  CHECK(line.beta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(line.beta_tilde.cwiseAbs().maxCoeff() == 0.0);
  CHECK(curvature_residual(line) < 1e-15);
  CHECK(line.passes_through_origin());
}

TEST_CASE("lawlor closed form") {
  CHECK(std::abs(eval_lawlor(0.0, 3, 1.0) - cplx(1.0, 0.0)) < 1e-15);
  cplx v = eval_lawlor(pi / 6, 3, 1.0);
  CHECK(v.real() == doctest::Approx(1.224744871391589).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(0.7071067811865475).epsilon(1e-12));
  CHECK_THROWS_AS(eval_lawlor(pi / 4, 3, 1.0), Error);
  try {
    eval_lawlor(pi / 4, 3, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("integrated lawlor matches the closed form") {
  double S = lawlor_arc_length(0.9 * pi / 4, 3, 1.0);
  auto c = integrate_curve_ode(0.0, 3, 1.0, I, {-S, S}, 1e-12, 301);
  double worst = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    double t = std::arg(c.points(i));
    worst = std::max(worst, std::abs(c.points(i) - eval_lawlor(t, 3, 1.0)));
  }
  CHECK(worst < 1e-8);
  CHECK(arc_length_defect(c) < 1e-9);
  // beta is odd about the neck
  for (Index i = 0; i < c.size(); ++i) CHECK(std::abs(c.beta(i) + c.beta(c.size() - 1 - i)) < 1e-9);
}

TEST_CASE("m = 2 with a = 0 is a straight line") {
  cplx t0 = std::polar(1.0, 0.7);
  auto c = integrate_curve_ode(0.0, 2, 1.0, t0, {-1.0, 1.0}, 1e-12, 21);
  for (Index i = 0; i < c.size(); ++i) CHECK(std::abs(c.points(i) - (1.0 + c.params(i) * t0)) < 1e-12);
}

TEST_CASE("expander beta range") {
  auto e = find_expander_profile(1.0, 1.1, 3);
  CHECK(std::abs(beta_range(e) - (pi - 2.2)) < 1e-4);
  CHECK(arc_length_defect(e) < 1e-9);
  for (Index i = 1; i < e.size(); ++i) CHECK(e.beta(i) >= e.beta(i - 1) - 1e-12);
  CHECK(e.beta(e.size() / 2 + 1) > e.beta(e.size() / 2));
  CHECK_THROWS_AS(find_expander_profile(1.0, pi / 2, 3), Error);
}

TEST_CASE("small opening angle approaches pi / a") {
  auto e = find_expander_profile(1.0, 0.05, 3);
  CHECK(std::abs(beta_range(e) - (pi - 0.1)) < 1e-4);
}

TEST_CASE("round shrinker") {
  double r = shrinker_circle_radius(1.0, 3);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  // gamma = r e^{is/r} solves the curve equation with a = -1
  SampledCurve c = make_line(3, -1.0, 0.0, {0.0, 1.0}, 50);
  for (Index i = 0; i < c.size(); ++i) {
    double s = c.params(i);
    c.points(i) = r * std::exp(I * s / r);
    c.tangents(i) = I * std::exp(I * s / r);
    c.accelerations(i) = -std::exp(I * s / r) / r;
  }
  c.spec.kind = CurveKind::Shrinker;
  CHECK(curvature_residual(c) < 1e-10);
}

TEST_CASE("shrinker with winding (1, 3) closes") {
  auto c = find_shrinker_profile(1.0, 1, 3, 3);
  CHECK(c.spec.a == -1.0);
  CHECK(std::abs(c.points(0) - c.points(c.size() - 1)) < 1e-8);
  CHECK(arc_length_defect(c) < 1e-9);
  for (Index i = 1; i < c.size(); ++i) CHECK(c.beta(i) > c.beta(i - 1));
  CHECK(first_integral_deviation(c, 1.0) < 1e-6);
}

TEST_CASE("inadmissible shrinker winding") {
  CHECK_THROWS_AS(find_shrinker_profile(1.0, 1, 1, 3), Error);
}

TEST_CASE("curvature residual") {
  auto lc = sample_lawlor_closed_form(3, 1.0, 0.0);
  CHECK(curvature_residual(lc) < 1e-8);
  auto pc = lc;
  for (Index i = 0; i < pc.size(); ++i) pc.points(i) += 1e-3 * std::polar(1.0, double(i));
  CHECK(curvature_residual(pc) > 1e-4);
}

TEST_CASE("beta tilde derivative") {
  auto e = find_expander_profile(1.0, 0.7, 3);
  double s = 0.3 * e.s_max(), h = 1e-4;
  double db = (beta_at(e, s + h) - beta_at(e, s - h)) / (2 * h);
  double dbt = (beta_tilde_at(e, s + h) - beta_tilde_at(e, s - h)) / (2 * h);
  CHECK(std::abs(dbt - std::norm(evaluate(e, s).point) * db) < 1e-6);
  CHECK_THROWS_AS(beta_at(e, e.s_max() + 1.0), Error);
}

TEST_CASE("first integral sign") {
  auto e = find_expander_profile(1.0, 1.1, 3);
  CHECK(first_integral_deviation(e, 1.0) < 1e-6);
  // with the opposite sign on a beta the combination drifts by twice the beta range
  CHECK(first_integral_deviation(e, -1.0) > 1.0);
}

TEST_CASE("spec validation") {
  CurveSpec s;
  s.kind = CurveKind::Lawlor;
  s.a = 1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s.kind = CurveKind::Expander;
  CHECK_THROWS_AS(s.validate(), Error);  // alpha missing
  s.alpha = 0.5;
  CHECK_NOTHROW(s.validate());
  s.kind = CurveKind::Shrinker;
  s.a = -1.0;
  s.alpha.reset();
  s.winding = Winding{1, 3};
  CHECK_NOTHROW(s.validate());
  CHECK(curve_kind_from_string("expander") == CurveKind::Expander);
  CHECK(std::string(to_string(CurveKind::Lawlor)) == "lawlor");
}

}
