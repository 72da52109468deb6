#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "soliton/affine.hpp"
#include "soliton/curves.hpp"
#include "soliton/groups.hpp"
#include "soliton/profile.hpp"
#include "soliton/verify.hpp"

namespace soliton {

// shortest round-trip decimal form
std::string format_double(double v);

// hue in radians (wrapped to [0, 2 pi)), full saturation and value
std::array<std::uint8_t, 3> hue_color(double hue);

std::string curve_spec_json(const CurveSpec& spec);
CurveSpec curve_spec_from_json(const std::string& text);

void write_curve_csv(const std::string& path, const SampledCurve& curve);
void write_surface_csv(const std::string& path, const ProfileSurface& surface);

// Indices into the real coordinates (Re w1, Im w1, Re w2, Im w2, ...) used as x, y, z.
struct Projection {
  std::array<int, 3> axes{0, 1, 2};
};

struct Mesh {
  Eigen::MatrixX3d vertices;
  Eigen::MatrixX3i faces;
  Eigen::VectorXd scalar;  // per vertex, drives the color
  std::string scalar_name = "arg_z1";
  std::vector<std::array<std::uint8_t, 3>> colors;

  Index vertex_count() const { return vertices.rows(); }
  Index face_count() const { return faces.rows(); }
};

// rows x cols grid of points in C^n (one column per vertex, index i + rows * j), colored by hue(scalar)
Mesh grid_mesh(const Eigen::MatrixXcd& points, Index rows, Index cols, const Eigen::VectorXd& scalar,
               const Projection& projection = {});
Mesh surface_mesh(const ProfileSurface& surface, const Projection& projection = {});
Mesh orbit_mesh(const OrbitSampleSet& orbit, std::size_t element, const Projection& projection = {});

void write_obj(const std::string& path, const Mesh& mesh);
void write_ply(const std::string& path, const Mesh& mesh, bool binary = false);

// point cloud with one scalar attribute
void write_point_cloud_ply(const std::string& path, const Eigen::MatrixX3d& points, const Eigen::VectorXd& scalar,
                           const std::string& scalar_name, bool binary = false);
void write_fiber_csv(const std::string& path, const AffineFiber& fiber);
// projected to (Re z1, Re z2, Im z3), theta attribute
void write_fiber_ply(const std::string& path, const AffineFiber& fiber, bool binary = false);
void write_orbit_csv(const std::string& path, const OrbitSampleSet& orbit);

std::string checks_json(const std::vector<CheckResult>& checks, const std::map<std::string, double>& info = {});
void write_text(const std::string& path, const std::string& text);

}  // namespace soliton
