#pragma once

#include "gbec/geometry.hpp"
#include "gbec/landmarks.hpp"
#include "gbec/pipelines.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace gbec {

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1), 0 when n < 2
};

SampleStats sample_stats(const std::vector<double>& values);

struct GrooveRegression {
  std::string id;
  std::vector<double> distances;  // point-to-fitted-line, mm
  SampleStats stats;
};

struct LineRegressionReport {
  std::vector<GrooveRegression> grooves;
  double trial_mean = 0.0;  // mean of groove means
};

LineRegressionReport line_regression_errors(const DigitizationSet& dig,
                                            const std::vector<FeatureFit>& fits);

// Mean FLE below this (mm) is rounding noise; no reduction is reported.
inline constexpr double kFleResolution = 1e-9;

struct FeatureFle {
  std::string id;
  std::vector<double> pre_correction;   // digitized point -> ground-truth line
  std::vector<double> post_correction;  // projection on fitted line -> ground-truth line
  double mean_pre = 0.0;
  double mean_post = 0.0;
  double reduction_percent = 0.0;  // 100 (pre - post) / pre, 0 when pre <= kFleResolution
};

struct FleReport {
  std::vector<FeatureFle> features;
};

// Ground-truth lines are the model grooves mapped into the marker frame by
// `calibration` (eff_T_coilRef). Throws GroovesRequired for point models.
FleReport fle_report(const RigidTransform& calibration, const AttachmentSpec& spec,
                     const DigitizationSet& dig);

// Uses the trial's own calibration as ground truth.
FleReport fle_report(const CalibrationTrial& trial, const AttachmentSpec& spec,
                     const DigitizationSet& dig);

struct FeatureResidualStats {
  std::string id;
  SampleStats per_feature;  // over trials of the per-feature mean residual
};

struct ResidualReport {
  std::vector<FeatureResidualStats> features;
  SampleStats overall;  // over every (trial, feature) mean residual
};

ResidualReport landmark_residuals(const CalibrationTrial& trial);
ResidualReport landmark_residuals(const std::vector<CalibrationTrial>& trials);

struct OutlierPolicy {
  // Drop this many trials farthest (Euclidean, translation) from the
  // component-wise median translation before computing statistics.
  std::size_t drop_most_deviant = 0;
};

struct RepeatabilityReport {
  Vector3 translation_std = Vector3::Zero();  // mm
  Vector3 rotation_std = Vector3::Zero();     // deg, rotation-vector components about the mean
  Vector3 translation_mean = Vector3::Zero();
  std::size_t n_trials = 0;
  std::size_t outliers_removed = 0;
};

// Chordal mean rotation (projected arithmetic mean).
Matrix3 mean_rotation(const std::vector<RigidTransform>& transforms);

RepeatabilityReport repeatability(const std::vector<CalibrationTrial>& trials,
                                  const OutlierPolicy& policy = {});
RepeatabilityReport repeatability(const std::vector<RigidTransform>& transforms,
                                  const OutlierPolicy& policy = {});

using Vector6 = Eigen::Matrix<double, 6, 1>;

// Translation (mm) followed by rotation vector (deg).
Vector6 to_vector6(const RigidTransform& t);

struct WorkspaceCluster {
  std::string workspace;
  std::vector<Vector6> vectors;
  Vector3 translation_range = Vector3::Zero();  // max - min per axis
  Vector3 translation_centroid = Vector3::Zero();
  double rms_spread = 0.0;  // rms distance of translations to the centroid
};

struct WorkspaceReport {
  std::vector<WorkspaceCluster> clusters;
  Vector3 combined_translation_range = Vector3::Zero();
  double min_centroid_separation = 0.0;  // smallest pairwise centroid distance
  double max_within_spread = 0.0;        // largest cluster rms_spread
};

struct WorkspaceGroup {
  std::string workspace;
  std::vector<RigidTransform> transforms;
};

WorkspaceReport workspace_summary(const std::vector<WorkspaceGroup>& groups);

struct AlignmentTable {
  std::array<double, 6> mean{};  // x, y, z (mm), rx, ry, rz (deg); absolute errors
  std::array<double, 6> std{};
  std::size_t n = 0;
};

AlignmentTable alignment_table(const std::vector<AlignmentError>& errors);

// One-sided binomial sign test: P(X >= successes) for X ~ Bin(n, 1/2).
double sign_test_p_value(std::size_t successes, std::size_t n);

// Spearman rank correlation with average ranks for ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gbec
