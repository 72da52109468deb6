#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "soliton/errors.hpp"
#include "soliton/io.hpp"
#include "soliton/render.hpp"

using namespace soliton;
namespace fs = std::filesystem;

namespace {

std::string tmp(const std::string& name) {
  fs::path p = fs::path(SOLITON_TEST_TMP) / "io" / name;
  fs::create_directories(p.parent_path());
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ProfileSurface small_surface(FamilyTag tag, Index nx, Index ny) {
  FamilyParams p;
  p.nx = nx;
  p.ny = ny;
  return make_family(tag, p);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting round trips") {
  for (double v : {0.0, 1.0, -2.5, pi, 1e-17, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("hue colors") {
  auto r = hue_color(0.0);
  CHECK(r == std::array<std::uint8_t, 3>{255, 0, 0});
  auto g = hue_color(2 * pi / 3);
  CHECK(int(g[1]) == 255);
  CHECK(hue_color(-2 * pi / 3) == hue_color(4 * pi / 3));
}

TEST_CASE("curve spec json") {
  CurveSpec s;
  s.kind = CurveKind::Shrinker;
  s.a = -1.0;
  s.winding = Winding{1, 3};
  auto back = curve_spec_from_json(curve_spec_json(s));
  CHECK(back.kind == CurveKind::Shrinker);
  CHECK(back.a == -1.0);
  REQUIRE(back.winding);
  CHECK(back.winding->q == 3);
  CHECK_THROWS_AS(curve_spec_from_json("{\"kind\": \"expander\", \"a\": -1, \"alpha\": 0.5}"), Error);
  CHECK_THROWS_AS(curve_spec_from_json("not json"), Error);
}

TEST_CASE("curve and surface csv") {
  auto curve = make_lawlor(3, 1.0, 0.0, Sampling{25});
  write_curve_csv(tmp("c.csv"), curve);
  auto l = lines(slurp(tmp("c.csv")));
  REQUIRE(l.size() == 26);
  CHECK(l[0] == "s,x,y,tangent_angle,polar_angle,beta,beta_tilde");

  auto s = small_surface(FamilyTag::C_lawlor_lawlor, 7, 5);
  write_surface_csv(tmp("s.csv"), s);
  CHECK(lines(slurp(tmp("s.csv"))).size() == 36);
}

TEST_CASE("meshes") {
  auto s = small_surface(FamilyTag::E_expander_line, 9, 6);
  Mesh m = surface_mesh(s);
  CHECK(m.vertex_count() == 54);
  CHECK(m.face_count() == 2 * 8 * 5);
  CHECK(m.colors.size() == 54);
  CHECK(m.faces.maxCoeff() == 53);
  CHECK(m.vertices(0, 0) == s.z1(0, 0).real());
  CHECK(m.vertices(0, 2) == s.z2(0, 0).real());

  Projection pr;
  pr.axes = {3, 2, 1};
  Mesh q = surface_mesh(s, pr);
  CHECK(q.vertices(10, 0) == s.z2(10 % 9, 10 / 9).imag());

  write_obj(tmp("m.obj"), m);
  auto l = lines(slurp(tmp("m.obj")));
  CHECK(std::count_if(l.begin(), l.end(), [](auto& x) { return x.rfind("v ", 0) == 0; }) == 54);
  CHECK(std::count_if(l.begin(), l.end(), [](auto& x) { return x.rfind("f ", 0) == 0; }) == 80);

  write_ply(tmp("m.ply"), m);
  auto text = slurp(tmp("m.ply"));
  CHECK(text.find("element vertex 54") != std::string::npos);
  CHECK(text.find("element face 80") != std::string::npos);
  CHECK(text.find("property double arg_z1") != std::string::npos);

  write_ply(tmp("mb.ply"), m, true);
  auto bin = slurp(tmp("mb.ply"));
  auto header_end = bin.find("end_header\n") + 11;
  CHECK(bin.size() - header_end == std::size_t(54 * (4 * 8 + 3) + 80 * (1 + 3 * 4)));
}

TEST_CASE("orbit mesh and csv") {
  auto g = GroupActionSpec::make(GroupKind::MaximalTorus, 3);
  auto orbit = lift_orbit(small_surface(FamilyTag::B_lawlor_line, 5, 4), g, sample_group(g, 3, 1));
  Mesh m = orbit_mesh(orbit, 2);
  CHECK(m.vertex_count() == 20);
  CHECK(m.vertices(7, 0) == orbit.points[2](0, 7).real());
  write_orbit_csv(tmp("o.csv"), orbit);
  CHECK(lines(slurp(tmp("o.csv"))).size() == 61);
}

TEST_CASE("fiber output") {
  auto f = sample_fiber(0.2, -0.3, 0.4, {4, 4, 2.0, 0});
  write_fiber_csv(tmp("f.csv"), f);
  CHECK(lines(slurp(tmp("f.csv"))).size() == f.size() + 1);
  write_fiber_ply(tmp("f.ply"), f);
  auto text = slurp(tmp("f.ply"));
  CHECK(text.find("element vertex " + std::to_string(f.size())) != std::string::npos);
  CHECK(text.find("property double theta") != std::string::npos);
}

TEST_CASE("check report json") {
  auto j = nlohmann::json::parse(checks_json({make_check("a", 1e-12, 1e-10), make_check("b", 2.0, 1.0)}, {{"k", 0.25}}));
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][0]["check_name"] == "a");
  CHECK(j["checks"][0]["pass"] == true);
  CHECK(j["checks"][1]["pass"] == false);
  CHECK(j["all_pass"] == false);
  CHECK(j["info"]["k"] == 0.25);
}

TEST_CASE("png output") {
  auto s = small_surface(FamilyTag::C_lawlor_lawlor, 20, 20);
  View v;
  v.width = 64;
  v.height = 48;
  Image img = render_meshes({surface_mesh(s)}, v);
  CHECK(img.width == 64);
  CHECK(img.rgb.size() == std::size_t(64 * 48 * 3));
  // something other than background got drawn
  CHECK(std::any_of(img.rgb.begin(), img.rgb.end(), [](auto c) { return c != 255; }));
  write_png(tmp("x.png"), img);
  auto bytes = slurp(tmp("x.png"));
  REQUIRE(bytes.size() > 8);
  CHECK(bytes.substr(1, 3) == "PNG");
}

TEST_CASE("unwritable paths") {
  CHECK_THROWS_AS(write_text("/proc/definitely/not/here.txt", "x"), Error);
}

}
