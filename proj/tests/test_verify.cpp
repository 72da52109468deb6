#include <doctest.h>

#include "soliton/errors.hpp"
#include "soliton/verify.hpp"

using namespace soliton;

namespace {

FamilyParams small(Index n = 60) {
  FamilyParams p;
  p.nx = p.ny = n;
  return p;
}

OrbitSampleSet lift(FamilyTag tag, GroupKind kind, Index n = 60, int elements = 4) {
  auto g = GroupActionSpec::make(kind, 3);
  return lift_orbit(make_family(tag, small(n)), g, sample_group(g, elements, 21));
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("determinant angle") {
  CHECK(std::abs(full_lagrangian_angle(Eigen::MatrixXcd::Identity(3, 3))) < 1e-15);
  for (int m : {2, 3, 4}) {
    Eigen::MatrixXcd f = std::polar(1.0, pi / m) * Eigen::MatrixXcd::Identity(m, m);
    CHECK(circle_distance(full_lagrangian_angle(f), pi, 2 * pi) < 1e-12);
  }
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Identity(3, 3);
  f.col(2) = f.col(1);
  CHECK_THROWS_AS(full_lagrangian_angle(f), Error);
  // positive rescaling leaves the angle alone
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Random(3, 3);
  Eigen::MatrixXcd s = r;
  s.col(1) *= 7.5;
  CHECK(std::abs(full_lagrangian_angle(r) - full_lagrangian_angle(s)) < 1e-12);
}

TEST_CASE("lifted (b) is special lagrangian") {
  for (auto kind : {GroupKind::SpecialOrthogonal, GroupKind::MaximalTorus}) {
    auto orbit = lift(FamilyTag::B_lawlor_line, kind);
    auto c = check_special_lagrangian_angle(orbit);
    CHECK(c.deviation < 1e-6);
    auto v = almost_calibrated_check(orbit);
    CHECK(v.theta_range < 1e-6);
  }
}

TEST_CASE("angle relation") {
  const std::pair<FamilyTag, GroupKind> cases[] = {{FamilyTag::C_lawlor_lawlor, GroupKind::SpecialOrthogonal},
                                                   {FamilyTag::E_expander_line, GroupKind::MaximalTorus},
                                                   {FamilyTag::F_expander_shrinker, GroupKind::SpecialOrthogonal}};
  for (const auto& [tag, kind] : cases) {
    auto g = GroupActionSpec::make(kind, 3);
    auto els = sample_group(g, 5, 2);
    auto s = make_family(tag, small());
    auto samples = random_relation_samples(s, els.size(), 120, 4);
    CHECK(check_angle_relation(s, g, els, samples) < 1e-6);
    CHECK(check_angle_relation(s, g, els, samples, FrameMode::FiniteDifference) < 1e-6);
  }
}

TEST_CASE("lifted frames are isotropic only for the isometric torus embedding") {
  auto s = make_family(FamilyTag::E_expander_line, small());
  auto samples = random_relation_samples(s, 4, 40, 6);
  auto worst = [&](const GroupActionSpec& g, FrameMode mode) {
    auto els = sample_group(g, 4, 3);
    double w = 0.0;
    for (const auto& r : samples) w = std::max(w, immersion_sample(s, g, els[r.element], r.x, r.y, mode).omega_residual);
    return w;
  };
  auto so = GroupActionSpec::make(GroupKind::SpecialOrthogonal, 3);
  auto plain = GroupActionSpec::make(GroupKind::MaximalTorus, 3);
  auto iso = GroupActionSpec::make(GroupKind::MaximalTorus, 3, true);
  CHECK(worst(so, FrameMode::Analytic) < 1e-12);
  CHECK(worst(so, FrameMode::FiniteDifference) < 1e-8);
  CHECK(worst(iso, FrameMode::Analytic) < 1e-12);
  CHECK(worst(iso, FrameMode::FiniteDifference) < 1e-8);
  CHECK(worst(plain, FrameMode::Analytic) > 0.1);
  // the angle itself does not see the rescaling
  auto els = sample_group(iso, 4, 3);
  CHECK(check_angle_relation(s, iso, els, samples) < 1e-6);
  CHECK(check_translator_identity(lift_orbit(s, iso, els)).deviation < 1e-6);
  CHECK(lift_orbit(s, iso, els).moment_residual < 1e-10);
}

TEST_CASE("relation in higher dimension") {
  for (auto kind : {GroupKind::SpecialOrthogonal, GroupKind::MaximalTorus}) {
    auto p = small(40);
    p.m = 4;
    p.alpha = 0.7;
    auto s = make_family(FamilyTag::E_expander_line, p);
    auto g = GroupActionSpec::make(kind, 4);
    auto els = sample_group(g, 4, 8);
    CHECK(check_angle_relation(s, g, els, random_relation_samples(s, els.size(), 60, 1)) < 1e-6);
  }
}

TEST_CASE("translator identity") {
  for (auto tag : {FamilyTag::D_line_shrinker, FamilyTag::E_expander_line, FamilyTag::F_expander_shrinker})
    for (auto kind : {GroupKind::SpecialOrthogonal, GroupKind::MaximalTorus}) {
      CAPTURE(to_string(tag));
      CHECK(check_translator_identity(lift(tag, kind)).deviation < 1e-6);
    }
  CHECK_THROWS_AS(check_translator_identity(lift(FamilyTag::B_lawlor_line, GroupKind::SpecialOrthogonal)), Error);
}

TEST_CASE("almost calibrated verdicts") {
  CHECK(almost_calibrated_check(lift(FamilyTag::E_expander_line, GroupKind::SpecialOrthogonal)).almost_calibrated);
  auto p = small();
  p.periods = 3;
  auto g = GroupActionSpec::make(GroupKind::SpecialOrthogonal, 3);
  auto d = lift_orbit(make_family(FamilyTag::D_line_shrinker, p), g, sample_group(g, 3, 1));
  auto v = almost_calibrated_check(d);
  CHECK_FALSE(v.almost_calibrated);
  CHECK(v.theta_range > pi);
}

TEST_CASE("scan on the flat plane and on (c)") {
  auto a = make_family(FamilyTag::A_plane, small(80));
  // (xy, (y^2 - x^2)/2) covers the plane twice, every hit is the antipodal pair
  auto ra = self_intersection_scan({a});
  CHECK_FALSE(ra.empty());
  for (const auto& p : ra.pairs) {
    CHECK(std::abs(p.x_a + p.x_b) < 1e-6);
    CHECK(std::abs(p.y_a + p.y_b) < 1e-6);
  }
  auto c = make_family(FamilyTag::C_lawlor_lawlor, small(120));
  CHECK(self_intersection_scan(cyclic_orbit(c, 2)).empty());
}

TEST_CASE("scan finds the reflected copy of (d) without identification") {
  auto d = make_family(FamilyTag::D_line_shrinker, small(120));
  auto copies = cyclic_orbit(d, 2);
  auto raw = self_intersection_scan(copies);
  CHECK_FALSE(raw.empty());
  ScanOptions o;
  o.identification = Identification::ReflectY;
  CHECK(self_intersection_scan(copies, o).empty());
  CHECK_THROWS_AS(self_intersection_scan({d}, o), Error);
}

TEST_CASE("scan is deterministic") {
  auto d = make_family(FamilyTag::D_line_shrinker, small(80));
  auto r1 = self_intersection_scan(cyclic_orbit(d, 2));
  auto r2 = self_intersection_scan(cyclic_orbit(d, 2));
  REQUIRE(r1.pairs.size() == r2.pairs.size());
  for (std::size_t k = 0; k < r1.pairs.size(); ++k) {
    CHECK(r1.pairs[k].x_a == r2.pairs[k].x_a);
    CHECK(r1.pairs[k].y_b == r2.pairs[k].y_b);
  }
}

TEST_CASE("singular set probe") {
  auto b = make_family(FamilyTag::B_lawlor_line, small());
  for (auto kind : {GroupKind::SpecialOrthogonal, GroupKind::MaximalTorus}) {
    auto probe = singular_set_probe(b, GroupActionSpec::make(kind, 3));
    CHECK(probe.applicable);
    CHECK(probe.line_parameter == 'y');
    CHECK(probe.rank_drop);
    // at m = 3 the torus is conjugate to SO(2), both orbits close up smoothly
    CHECK(probe.smooth_limit);
  }
  auto c = make_family(FamilyTag::C_lawlor_lawlor, small());
  CHECK_FALSE(singular_set_probe(c, GroupActionSpec::make(GroupKind::SpecialOrthogonal, 3)).applicable);
}

TEST_CASE("check results") {
  auto r = make_check("x", 1e-9, 1e-8);
  CHECK(r.pass);
  CHECK_FALSE(make_check("y", 1.0, 1e-8).pass);
}

}
