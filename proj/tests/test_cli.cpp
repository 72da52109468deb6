#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "soliton/errors.hpp"

namespace fs = std::filesystem;
using soliton::cli::run;

namespace {

std::string dir(const std::string& name) {
  fs::path p = fs::path(SOLITON_TEST_TMP) / "cli" / name;
  fs::remove_all(p);
  return p.string();
}

int call(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "soliton_lab");
  std::ostringstream out, err;
  int code = run(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  std::string text;
  CHECK(call({}, &text) == 2);
  CHECK(text.find("curve") != std::string::npos);
  CHECK(call({"--bogus"}) == 2);
  CHECK(call({"curve", "--kind", "spiral", "-o", dir("bad")}) == 2);
  soliton::cli::RunConfig empty;
  std::ostringstream out, err;
  CHECK(soliton::cli::execute(empty, out, err) == 2);
  CHECK(call({"--help"}) == 0);
}

TEST_CASE("config parsing") {
  auto c = soliton::cli::parse_config(R"({"command": "verify", "family": "e", "resolution": {"nx": 30, "ny": 20},
                                          "tolerances": {"moment_map": 1e-9}, "figures": "d"})");
  CHECK(c.command == "verify");
  CHECK(c.nx == 30);
  CHECK(c.ny == 20);
  CHECK(c.tolerances.at("moment_map") == 1e-9);
  CHECK(c.figures == std::vector<std::string>{"d"});
  CHECK(soliton::cli::parse_config(R"({"resolution": 12})").ny == 12);
  CHECK_THROWS_AS(soliton::cli::parse_config(R"({"colour": 1})"), soliton::Error);
  CHECK_THROWS_AS(soliton::cli::parse_config(R"({"tolerances": {"x": -1}})"), soliton::Error);
  CHECK_THROWS_AS(soliton::cli::parse_config("[1, 2]"), soliton::Error);
}

TEST_CASE("curve command") {
  auto d = dir("curve");
  REQUIRE(call({"-o", d, "curve", "--kind", "lawlor", "--count", "50", "--plot"}) == 0);
  CHECK(fs::file_size(fs::path(d) / "curve_lawlor.csv") > 0);
  CHECK(fs::file_size(fs::path(d) / "curve_lawlor.png") > 0);
  auto j = nlohmann::json::parse(slurp(fs::path(d) / "curve_lawlor.json"));
  CHECK(j["kind"] == "lawlor");
}

TEST_CASE("profile command") {
  auto d = dir("profile");
  REQUIRE(call({"-o", d, "profile", "--family", "e", "--nx", "12", "--ny", "10", "--export", "ply"}) == 0);
  auto text = slurp(fs::path(d) / "profile_e.ply");
  CHECK(text.find("element vertex 120") != std::string::npos);
}

TEST_CASE("verify command") {
  auto d = dir("verify");
  REQUIRE(call({"-o", d, "verify", "--family", "c", "--group", "torus", "--nx", "40", "--ny", "40", "--elements", "3",
                "--samples", "40"}) == 0);
  auto j = nlohmann::json::parse(slurp(fs::path(d) / "verify_c_torus_m3.json"));
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"].size() >= 5);

  // a tolerance nobody can meet
  CHECK(call({"-o", d, "--tol", "moment_map=1e-300", "verify", "--family", "c", "--nx", "20", "--ny", "20",
              "--elements", "2", "--samples", "10"}) == 1);
  CHECK(call({"-o", d, "--tol", "moment_map", "verify"}) == 2);
}

TEST_CASE("affine suite reports failures") {
  auto d = dir("affine");
  REQUIRE(call({"-o", d, "verify", "--suite", "affine", "--batch", "200"}) == 1);
  auto j = nlohmann::json::parse(slurp(fs::path(d) / "verify_affine.json"));
  std::map<std::string, bool> pass;
  for (const auto& c : j["checks"]) pass[c["check_name"]] = c["pass"];
  CHECK(pass.at("poisson_brackets"));
  CHECK(pass.at("action_invariance"));
  CHECK(pass.at("closed_form_angle"));
  CHECK_FALSE(pass.at("det_M_closed_form"));
  CHECK_FALSE(pass.at("fiber_translator_angle"));

  REQUIRE(call({"-o", d, "affine", "--radial", "5", "--angular", "5", "--batch", "50"}) == 0);
  CHECK(fs::exists(fs::path(d) / "fiber.ply"));
  CHECK(fs::exists(fs::path(d) / "affine_report.json"));
}

TEST_CASE("config file with flag override") {
  auto d = dir("config");
  fs::create_directories(d);
  auto cfg = (fs::path(d) / "run.json").string();
  std::ofstream(cfg) << R"({"command": "export", "family": "b", "resolution": 8, "export": ["csv"]})";
  REQUIRE(call({"--config", cfg, "-o", d}) == 0);
  CHECK(fs::exists(fs::path(d) / "export_b.csv"));
  REQUIRE(call({"--config", cfg, "-o", d, "export", "--family", "d"}) == 0);
  CHECK(fs::exists(fs::path(d) / "export_d.csv"));
  CHECK(fs::exists(fs::path(d) / "export_b.csv"));
  std::ofstream(cfg) << R"({"nope": true})";
  CHECK(call({"--config", cfg, "-o", d}) == 2);
}

TEST_CASE("runs are reproducible") {
  auto a = dir("rep_a");
  auto b = dir("rep_b");
  for (const auto& d : {a, b})
    REQUIRE(call({"-o", d, "orbit", "--family", "f", "--nx", "15", "--ny", "15", "--elements", "3", "--export", "csv"}) == 0);
  auto name = fs::path("orbit_f_so.csv");
  CHECK(slurp(fs::path(a) / name) == slurp(fs::path(b) / name));
  CHECK(!slurp(fs::path(a) / name).empty());
}

}
