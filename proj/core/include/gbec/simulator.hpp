#pragma once

#include "gbec/geometry.hpp"
#include "gbec/landmarks.hpp"
#include "gbec/pipelines.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace gbec {

struct NoiseSpec {
  double tracker_sigma = 0.25;           // mm, isotropic per axis per digitized point
  double tracker_rotation_sigma = 0.02;  // deg per axis, on tracked marker poses
  // Operator stroke: start and stop positions along each groove scatter by
  // this much around the true groove ends (mm).
  double stroke_sigma = 0.6;
  // Along-groove jitter of interior points, uniform in +-fraction of spacing.
  double jitter_fraction = 0.1;
  double robot_translation_sigma = 0.0;  // mm per axis
  double robot_rotation_sigma = 0.0;     // deg per axis
  std::map<std::string, double> feature_sigma_multiplier;
  std::uint64_t seed = 0;

  static NoiseSpec noiseless(std::uint64_t seed = 0);
  double multiplier_for(const std::string& feature_id) const;
};

// Throws ConfigInvalid for negative sigmas or multipliers.
void validate(const NoiseSpec& noise);

struct WorkspaceSpec {
  std::string name = "ws1";
  Point3 center = Point3(450.0, 0.0, 350.0);  // robot base frame
  double diameter = 400.0;
  double orientation_range = 15.0;  // deg, per axis
  std::size_t n_poses = 50;
  // Constant kinematic offset between reported and true flange pose for
  // this workspace (identity when the offset mode is off).
  RigidTransform robot_offset;
};

void validate(const WorkspaceSpec& ws);

struct SceneTruth {
  RigidTransform true_handeye;   // eff_T_coilRef
  RigidTransform camera_to_base;  // camera_T_base
  AttachmentSpec attachment;
};

SceneTruth default_scene(AttachmentSpec attachment);

struct DigitizationOptions {
  std::size_t points_per_groove = 52;
  std::size_t touches_per_landmark = 5;
};

DigitizationSet simulate_digitization(const SceneTruth& scene, const NoiseSpec& noise,
                                      const DigitizationOptions& options = {});

std::vector<PoseSample> simulate_pose_stream(const SceneTruth& scene, const WorkspaceSpec& ws,
                                             const NoiseSpec& noise);

// Uniformly random rotation (Haar measure) from a generator.
Matrix3 random_rotation(std::mt19937_64& rng);

// Deterministic seed derivation for independent streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

}  // namespace gbec
