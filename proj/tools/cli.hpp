#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace soliton::cli {

enum ExitCode : int { Ok = 0, ChecksFailed = 1, Usage = 2, Failure = 3 };

struct RunConfig {
  std::string command;  // curve | profile | orbit | affine | verify | export | plot
  std::string output_dir = "soliton_out";
  std::uint64_t seed = 7;
  std::map<std::string, double> tolerances;

  // curves and profiles
  std::string kind = "lawlor";
  std::string family = "c";
  std::string group = "so";
  int m = 3;
  double alpha = 1.1;
  double scale = 1.0;
  double mu = 1.0;
  double phase = 0.0;
  int p = 1;
  int q = 3;
  std::optional<int> periods;
  Eigen::Index nx = 200;
  Eigen::Index ny = 200;
  Eigen::Index count = 400;
  double line_extent = 2.0;

  // orbits and verification
  int elements = 8;
  int samples = 200;
  bool isometric = false;  // torus embedding scaled by 1/sqrt(m-1)
  bool scan = false;
  Eigen::Index scan_resolution = 400;
  std::string suite = "profile";  // profile | affine

  // affine fibers
  double a = -0.5;
  double b = -0.5;
  double c = 0.0;
  Eigen::Index radial = 24;
  Eigen::Index angular = 24;
  double r1_max = 3.0;
  int sheet = 0;
  std::size_t batch = 10000;

  // outputs
  std::vector<std::string> exports;  // obj, ply, plyb, csv
  bool plot = false;
  std::vector<std::string> figures;  // d, b, e, c, curves; empty means all
  std::array<int, 3> projection{0, 1, 2};
};

// a JSON object whose keys mirror RunConfig's fields; unknown keys are a config error
RunConfig parse_config(const std::string& json_text);

int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

// argv-style entry point, argv[0] is the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soliton::cli
