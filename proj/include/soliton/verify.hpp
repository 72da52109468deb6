#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "soliton/groups.hpp"
#include "soliton/profile.hpp"

namespace soliton {

// theta = arg det of the m x m complex matrix of tangent columns
double full_lagrangian_angle(const Eigen::MatrixXcd& frame);

// max |omega_0(u_i, u_j)| / (|u_i| |u_j|) over column pairs
double frame_omega_defect(const Eigen::MatrixXcd& frame);

enum class FrameMode { Analytic, FiniteDifference };

struct ImmersionSample {
  Eigen::VectorXcd point;
  Eigen::MatrixXcd frame;  // orbit fields, then d/dx, d/dy
  double angle = 0.0;
  // mod-pi residual of angle - (profile angle + (m-2) arg z1 - (m-1) eta)
  double theta_residual = 0.0;
  double omega_residual = 0.0;
};

ImmersionSample immersion_sample(const ProfileSurface& surface, const GroupActionSpec& group,
                                 const GroupElement& g, double x, double y,
                                 FrameMode mode = FrameMode::Analytic);

struct RelationSample {
  std::size_t element = 0;
  double x = 0.0;
  double y = 0.0;
};

std::vector<RelationSample> random_relation_samples(const ProfileSurface& surface, std::size_t elements,
                                                    int n, std::uint64_t seed);

// max mod-pi distance between theta_L(g . w) and theta of the profile in Phi-coordinates plus (m-2) arg
double check_angle_relation(const ProfileSurface& surface, const GroupActionSpec& group,
                            const std::vector<GroupElement>& elements,
                            const std::vector<RelationSample>& samples,
                            FrameMode mode = FrameMode::Analytic);

struct ConstantEstimate {
  double constant = 0.0;
  double deviation = 0.0;
};

// theta(F) + Im F_m over every lifted sample, mod pi
ConstantEstimate check_translator_identity(const OrbitSampleSet& orbit);
// theta(F) over every lifted sample, mod pi
ConstantEstimate check_special_lagrangian_angle(const OrbitSampleSet& orbit);

struct CalibrationVerdict {
  double theta_range = 0.0;
  bool almost_calibrated = false;
};

CalibrationVerdict almost_calibrated_check(const OrbitSampleSet& orbit);

// lifted angle at every grid point of one element, as a rows x cols matrix of principal values
Eigen::MatrixXd lifted_angles(const OrbitSampleSet& orbit, std::size_t element);

enum class Identification { None, ReflectX, ReflectY };

struct ScanOptions {
  double tolerance_factor = 1e-6;  // times the bounding-box diagonal
  int dedup_cells = 3;
  Identification identification = Identification::None;
  int max_iterations = 60;
};

struct Collision {
  int image_a = 0;
  double x_a = 0.0, y_a = 0.0;
  int image_b = 0;
  double x_b = 0.0, y_b = 0.0;
  double distance = 0.0;
};

struct CollisionReport {
  std::vector<Collision> pairs;
  Index rows = 0;
  Index cols = 0;
  int images = 0;
  double tolerance = 0.0;
  std::size_t candidates = 0;
  std::size_t refined = 0;

  bool empty() const { return pairs.empty(); }
};

CollisionReport self_intersection_scan(const std::vector<ProfileSurface>& images,
                                       const ScanOptions& options = {});

struct SingularProbe {
  bool applicable = false;
  std::string reason;
  char line_parameter = ' ';  // 'x' or 'y'
  std::vector<double> offsets;
  std::vector<double> sigma_min;       // smallest singular value of the lifted differential
  std::vector<double> tangent_spread;  // max projector distance of tangent planes across g
  bool rank_drop = false;
  bool smooth_limit = false;
};

SingularProbe singular_set_probe(const ProfileSurface& surface, const GroupActionSpec& group,
                                 int elements = 8, std::uint64_t seed = 7);

struct CheckResult {
  std::string check_name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline CheckResult make_check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, residual < tolerance};
}

}  // namespace soliton
