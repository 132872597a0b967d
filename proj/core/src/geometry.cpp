#include "gbec/geometry.hpp"

#include "gbec/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace gbec {

bool is_finite(const Point3& p) { return p.allFinite(); }

double orthogonality_error(const Matrix3& r) {
  return (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff();
}

Matrix3 nearest_rotation(const Matrix3& m) {
  Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 d = Matrix3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

RigidTransform::RigidTransform()
    : rotation_(Matrix3::Identity()), translation_(Vector3::Zero()) {}

RigidTransform::RigidTransform(const Matrix3& rotation, const Vector3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation_.allFinite() || !translation_.allFinite()) {
    throw Error(ErrorCode::kInvalidTransform, "non-finite transform component");
  }
  if (orthogonality_error(rotation_) > kRotationTolerance) {
    std::ostringstream msg;
    msg << "rotation is not orthogonal (|R^T R - I|_max = "
        << orthogonality_error(rotation_) << ")";
    throw Error(ErrorCode::kInvalidTransform, msg.str());
  }
  if (std::abs(rotation_.determinant() - 1.0) > kRotationTolerance) {
    throw Error(ErrorCode::kInvalidTransform, "rotation determinant is not +1");
  }
}

RigidTransform RigidTransform::from_translation(const Vector3& t) {
  return {Matrix3::Identity(), t};
}

RigidTransform RigidTransform::from_rotation(const Matrix3& r) { return {r, Vector3::Zero()}; }

RigidTransform RigidTransform::from_rotation_vector_deg(const Vector3& rotvec_deg,
                                                        const Vector3& t) {
  const double angle = deg_to_rad(rotvec_deg.norm());
  if (angle == 0.0) return from_translation(t);
  const Matrix3 r = Eigen::AngleAxisd(angle, rotvec_deg.normalized()).toRotationMatrix();
  return {r, t};
}

RigidTransform RigidTransform::rot_x(double deg) {
  return from_rotation(Eigen::AngleAxisd(deg_to_rad(deg), Vector3::UnitX()).toRotationMatrix());
}
RigidTransform RigidTransform::rot_y(double deg) {
  return from_rotation(Eigen::AngleAxisd(deg_to_rad(deg), Vector3::UnitY()).toRotationMatrix());
}
RigidTransform RigidTransform::rot_z(double deg) {
  return from_rotation(Eigen::AngleAxisd(deg_to_rad(deg), Vector3::UnitZ()).toRotationMatrix());
}

Vector3 RigidTransform::rotation_vector_deg() const { return rotation_log_deg(rotation_); }

Eigen::Matrix4d RigidTransform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

std::ostream& operator<<(std::ostream& os, const RigidTransform& t) {
  const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, " ", "\n", "  [", "]");
  return os << "RigidTransform(\n" << t.matrix().format(fmt) << ")";
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  Matrix3 r = a.rotation() * b.rotation();
  if (orthogonality_error(r) > kRotationTolerance) r = nearest_rotation(r);
  return {r, a.rotation() * b.translation() + a.translation()};
}

RigidTransform invert(const RigidTransform& t) {
  const Matrix3 rt = t.rotation().transpose();
  return {rt, -(rt * t.translation())};
}

Point3 apply(const RigidTransform& t, const Point3& p) { return t(p); }

double rotation_angle_deg(const Matrix3& r) {
  // atan2 form stays accurate near 0 and 180 degrees where acos does not.
  const Vector3 axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double s = 0.5 * axis.norm();
  const double c = 0.5 * (r.trace() - 1.0);
  return rad_to_deg(std::atan2(s, c));
}

double rotation_angle_between(const RigidTransform& a, const RigidTransform& b) {
  return rotation_angle_deg(a.rotation() * b.rotation().transpose());
}

Vector3 rotation_log_deg(const Matrix3& r) {
  const Eigen::AngleAxisd aa(r);
  Vector3 v = aa.axis() * rad_to_deg(aa.angle());
  if (!v.allFinite()) v.setZero();
  return v;
}

Line3::Line3(const Point3& anchor, const Vector3& direction) : anchor_(anchor) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::kDegenerateGeometry, "line direction has zero length");
  }
  // Directions that are already unit keep their bits, so stored lines
  // round-trip exactly.
  direction_ = std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? direction : Vector3(direction / n);
}

double Line3::distance_to(const Point3& p) const {
  const Vector3 d = p - anchor_;
  return (d - direction_.dot(d) * direction_).norm();
}

Line3 transform_line(const RigidTransform& t, const Line3& line) {
  return {t(line.anchor()), t.rotation() * line.direction()};
}

double line_to_line_distance(const Line3& a, const Line3& b) {
  const Vector3 n = a.direction().cross(b.direction());
  const Vector3 w = b.anchor() - a.anchor();
  if (n.norm() < 1e-12) return a.distance_to(b.anchor());
  return std::abs(w.dot(n)) / n.norm();
}

PointCloud transform_cloud(const RigidTransform& t, const PointCloud& cloud,
                           std::string frame_label) {
  PointCloud out;
  out.frame_label = std::move(frame_label);
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(t(p));
  return out;
}

}  // namespace gbec
