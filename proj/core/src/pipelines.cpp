#include "gbec/pipelines.hpp"

#include "gbec/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gbec {
namespace {

Matrix3 skew(const Vector3& v) {
  Matrix3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Modified Rodrigues vector 2 sin(theta/2) * axis.
Vector3 rodrigues2(const Matrix3& r) {
  const Eigen::AngleAxisd aa(r);
  return 2.0 * std::sin(0.5 * aa.angle()) * aa.axis();
}

constexpr double kMinMotionAngleDeg = 1e-6;
constexpr double kParallelAxisToleranceDeg = 1.0;

void require_non_parallel_axes(const std::vector<MotionPair>& pairs) {
  std::vector<Vector3> axes;
  for (const auto& p : pairs) {
    const Eigen::AngleAxisd aa(p.b.rotation());
    if (rad_to_deg(aa.angle()) > kMinMotionAngleDeg) axes.push_back(aa.axis());
  }
  const double cos_tol = std::cos(deg_to_rad(kParallelAxisToleranceDeg));
  for (std::size_t i = 0; i < axes.size(); ++i) {
    for (std::size_t j = i + 1; j < axes.size(); ++j) {
      if (std::abs(axes[i].dot(axes[j])) < cos_tol) return;
    }
  }
  throw Error(ErrorCode::kInsufficientMotion,
              "relative rotation axes are parallel within 1 deg (or motions are zero)");
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

const DigitizedFeature* DigitizationSet::find(std::string_view id) const {
  for (const auto& f : features) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

std::string_view to_string(Method m) { return m == Method::kGbec ? "gbec" : "axxb"; }

Method method_from_string(std::string_view s) {
  if (s == "gbec") return Method::kGbec;
  if (s == "axxb") return Method::kAxxb;
  throw Error(ErrorCode::kParseError, "unknown method '" + std::string(s) + "'");
}

std::string_view to_string(Pairing p) {
  return p == Pairing::kConsecutive ? "consecutive" : "all_pairs";
}

Pairing pairing_from_string(std::string_view s) {
  if (s == "consecutive") return Pairing::kConsecutive;
  if (s == "all_pairs") return Pairing::kAllPairs;
  throw Error(ErrorCode::kParseError, "unknown pairing '" + std::string(s) + "'");
}

CalibrationTrial run_gbec(const AttachmentSpec& spec, const DigitizationSet& dig) {
  PointCloud model{{}, std::string(kEffectorFrame)};
  PointCloud measured{{}, std::string(kMarkerFrame)};
  std::vector<std::pair<std::string, std::size_t>> feature_sizes;
  CalibrationTrial trial;
  trial.method = Method::kGbec;

  if (spec.kind == AttachmentKind::kGrooves) {
    const auto& gm = spec.grooves();
    for (const auto& groove : gm.grooves) {
      const auto* f = dig.find(groove.id);
      if (f == nullptr) {
        throw Error(ErrorCode::kMissingFeature, "no digitization for groove '" + groove.id + "'");
      }
      FeatureFit ff{groove.id, {Line3(Point3::Zero(), Vector3::UnitX()), {}, 0.0}, 0.0, 0.0};
      try {
        ff.fit = fit_line(f->cloud);
      } catch (const Error& e) {
        throw Error(e.code(), "groove '" + groove.id + "': " + e.message());
      }
      ff.t_first = ff.fit.line.parameter_of(f->cloud.points.front());
      ff.t_last = ff.fit.line.parameter_of(f->cloud.points.back());
      if (!(ff.t_last > ff.t_first)) {
        throw Error(ErrorCode::kDegenerateGeometry,
                    "groove '" + groove.id + "': digitized extent is empty");
      }
      const PointCloud sam =
          sample_line_segment(ff.fit.line, ff.t_first, ff.t_last, gm.samples_per_groove);
      const PointCloud ref = gm.samples(groove);
      model.points.insert(model.points.end(), ref.points.begin(), ref.points.end());
      measured.points.insert(measured.points.end(), sam.points.begin(), sam.points.end());
      feature_sizes.emplace_back(groove.id, sam.size());
      trial.line_fits.push_back(std::move(ff));
    }
  } else {
    for (const auto& lm : spec.points().landmarks) {
      const auto* f = dig.find(lm.id);
      if (f == nullptr || f->cloud.empty()) {
        throw Error(ErrorCode::kMissingFeature, "no digitization for landmark '" + lm.id + "'");
      }
      Point3 mean = Point3::Zero();
      for (const auto& p : f->cloud.points) mean += p;
      mean /= static_cast<double>(f->cloud.size());
      model.points.push_back(lm.position);
      measured.points.push_back(mean);
      feature_sizes.emplace_back(lm.id, 1);
    }
  }

  RegistrationResult reg = solve_paired_point(model, measured);
  std::size_t offset = 0;
  for (const auto& [id, n] : feature_sizes) {
    FeatureResidual fr{id, {}, 0.0};
    fr.residuals.assign(reg.per_point_residuals.begin() + static_cast<std::ptrdiff_t>(offset),
                        reg.per_point_residuals.begin() + static_cast<std::ptrdiff_t>(offset + n));
    fr.mean = mean_of(fr.residuals);
    trial.feature_residuals.push_back(std::move(fr));
    offset += n;
  }
  trial.result = reg.transform;
  trial.registration = std::move(reg);
  return trial;
}

std::vector<MotionPair> build_motion_pairs(const std::vector<PoseSample>& samples,
                                           Pairing pairing) {
  if (samples.size() < 3) {
    throw Error(ErrorCode::kInsufficientMotion, "AX=XB needs at least 3 pose samples");
  }
  std::vector<MotionPair> pairs;
  auto add = [&](std::size_t i, std::size_t j) {
    pairs.push_back({compose(invert(samples[i].marker_pose), samples[j].marker_pose),
                     compose(invert(samples[i].robot_pose), samples[j].robot_pose)});
  };
  if (pairing == Pairing::kConsecutive) {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) add(i, i + 1);
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (std::size_t j = i + 1; j < samples.size(); ++j) add(i, j);
    }
  }
  require_non_parallel_axes(pairs);
  return pairs;
}

RigidTransform solve_ax_xb(const std::vector<MotionPair>& pairs) {
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kInsufficientMotion, "AX=XB needs at least 2 motion pairs");
  }
  require_non_parallel_axes(pairs);

  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd m(3 * n, 3);
  Eigen::VectorXd rhs(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector3 pa = rodrigues2(pairs[i].a.rotation());
    const Vector3 pb = rodrigues2(pairs[i].b.rotation());
    m.block<3, 3>(3 * i, 0) = skew(pa + pb);
    rhs.segment<3>(3 * i) = pb - pa;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> rot_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = rot_svd.singularValues();
  if (sv(2) < kDegeneracyTolerance * sv(0)) {
    throw Error(ErrorCode::kInsufficientMotion, "rotation system is rank deficient");
  }
  // Solution is tan(theta/2) * axis.
  const Vector3 half_tan = rot_svd.solve(rhs);
  const double theta = 2.0 * std::atan(half_tan.norm());
  Matrix3 rx = Matrix3::Identity();
  if (half_tan.norm() > 0.0) {
    rx = Eigen::AngleAxisd(theta, half_tan.normalized()).toRotationMatrix();
  }
  rx = nearest_rotation(rx);

  Eigen::MatrixXd c(3 * n, 3);
  Eigen::VectorXd d(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c.block<3, 3>(3 * i, 0) = pairs[i].a.rotation() - Matrix3::Identity();
    d.segment<3>(3 * i) = rx * pairs[i].b.translation() - pairs[i].a.translation();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> t_svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& tv = t_svd.singularValues();
  if (tv(2) < kDegeneracyTolerance * tv(0) || tv(0) == 0.0) {
    throw Error(ErrorCode::kSingularSystem, "translation system is rank deficient");
  }
  return {rx, t_svd.solve(d)};
}

CalibrationTrial solve_axxb(const std::vector<MotionPair>& pairs) {
  const RigidTransform x = solve_ax_xb(pairs);
  AxxbDiagnostics diag;
  diag.pair_count = pairs.size();
  double rot_sq = 0.0;
  double trans_sq = 0.0;
  for (const auto& p : pairs) {
    const RigidTransform lhs = compose(p.a, x);
    const RigidTransform rhs = compose(x, p.b);
    const double ang = rotation_angle_between(lhs, rhs);
    rot_sq += ang * ang;
    trans_sq += (lhs.translation() - rhs.translation()).squaredNorm();
  }
  diag.rotation_rms_deg = std::sqrt(rot_sq / static_cast<double>(pairs.size()));
  diag.translation_rms_mm = std::sqrt(trans_sq / static_cast<double>(pairs.size()));

  CalibrationTrial trial;
  trial.method = Method::kAxxb;
  trial.result = invert(x);
  trial.axxb = diag;
  return trial;
}

Vector3 roll_pitch_yaw_deg(const Matrix3& r) {
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {rad_to_deg(roll), rad_to_deg(pitch), rad_to_deg(yaw)};
}

AlignmentError alignment_error(const RigidTransform& estimated, const RigidTransform& truth,
                               const RigidTransform& target_tool_pose) {
  const RigidTransform achieved = compose(compose(target_tool_pose, invert(estimated)), truth);
  const RigidTransform delta = compose(invert(target_tool_pose), achieved);
  return {delta.translation(), roll_pitch_yaw_deg(delta.rotation())};
}

}  // namespace gbec
