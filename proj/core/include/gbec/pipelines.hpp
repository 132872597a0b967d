#pragma once

#include "gbec/geometry.hpp"
#include "gbec/landmarks.hpp"
#include "gbec/registration.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gbec {

inline constexpr std::string_view kMarkerFrame = "coilRef";
inline constexpr std::string_view kEffectorFrame = "eff";

struct DigitizedFeature {
  std::string id;
  PointCloud cloud;  // marker frame
};

// Raw probe digitizations keyed by feature id, in acquisition order.
struct DigitizationSet {
  std::string attachment;
  std::string frame{kMarkerFrame};
  std::size_t points_per_groove = 0;
  std::vector<DigitizedFeature> features;

  const DigitizedFeature* find(std::string_view id) const;
};

// robot_pose: base -> end-effector as reported by the controller.
// marker_pose: camera -> marker as reported by the tracker.
struct PoseSample {
  RigidTransform robot_pose;
  RigidTransform marker_pose;
};

enum class Method { kGbec, kAxxb };
std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct FeatureResidual {
  std::string id;
  std::vector<double> residuals;  // per registered point, mm
  double mean = 0.0;
};

struct FeatureFit {
  std::string id;
  LineFitResult fit;
  double t_first = 0.0;  // digitized extent along the fitted line
  double t_last = 0.0;
};

struct AxxbDiagnostics {
  std::size_t pair_count = 0;
  double rotation_rms_deg = 0.0;     // angle of A X (X B)^-1 over pairs
  double translation_rms_mm = 0.0;   // |t(A X) - t(X B)| over pairs
};

struct TrialMetadata {
  std::string campaign;
  std::size_t trial_index = 0;
  std::string workspace;
  std::uint64_t seed = 0;
};

struct CalibrationTrial {
  Method method = Method::kGbec;
  RigidTransform result;  // eff_T_coilRef: marker frame -> end-effector frame
  std::optional<RegistrationResult> registration;
  std::vector<FeatureResidual> feature_residuals;
  std::vector<FeatureFit> line_fits;
  std::optional<AxxbDiagnostics> axxb;
  TrialMetadata metadata;
};

// Geometry-based calibration: fit each digitized groove, resample it at the
// model's sample count over the digitized extent, and register against the
// model samples. Point landmarks use the mean of their repeated touches.
CalibrationTrial run_gbec(const AttachmentSpec& spec, const DigitizationSet& dig);

struct MotionPair {
  RigidTransform a;  // marker_i^-1 * marker_j
  RigidTransform b;  // robot_i^-1 * robot_j
};

enum class Pairing { kConsecutive, kAllPairs };
std::string_view to_string(Pairing p);
Pairing pairing_from_string(std::string_view s);

// With these definitions A X = X B holds for X = coilRef_T_eff, the inverse of
// the hand-eye transform.
std::vector<MotionPair> build_motion_pairs(const std::vector<PoseSample>& samples,
                                           Pairing pairing = Pairing::kConsecutive);

// Tsai-Lenz solution of A X = X B.
RigidTransform solve_ax_xb(const std::vector<MotionPair>& pairs);

// AX=XB baseline trial. The reported result is inverted so both methods emit
// eff_T_coilRef.
CalibrationTrial solve_axxb(const std::vector<MotionPair>& pairs);

struct AlignmentError {
  Vector3 translation_mm = Vector3::Zero();  // x, y, z in the target frame
  Vector3 rotation_deg = Vector3::Zero();    // roll, pitch, yaw (rx, ry, rz)

  std::array<double, 6> components() const {
    return {translation_mm.x(), translation_mm.y(), translation_mm.z(),
            rotation_deg.x(),   rotation_deg.y(),   rotation_deg.z()};
  }
};

// Achieved pose when the controller trusts `estimated` while the hardware
// follows `truth`: achieved = target * estimated^-1 * truth. Errors are the
// achieved pose relative to target, expressed in the target frame.
AlignmentError alignment_error(const RigidTransform& estimated, const RigidTransform& truth,
                               const RigidTransform& target_tool_pose);

// Roll/pitch/yaw of R = Rz(yaw) Ry(pitch) Rx(roll), degrees.
Vector3 roll_pitch_yaw_deg(const Matrix3& r);

}  // namespace gbec
