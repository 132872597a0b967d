#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <iosfwd>
#include <string>
#include <vector>

namespace gbec {

// All lengths are millimeters, all angles degrees unless a name says _rad.
using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kRotationTolerance = 1e-9;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

bool is_finite(const Point3& p);

// Proper rigid motion x -> R x + t. Construction validates orthogonality and
// det(R) = +1 within kRotationTolerance and throws Error otherwise.
class RigidTransform {
 public:
  RigidTransform();
  RigidTransform(const Matrix3& rotation, const Vector3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vector3& t);
  static RigidTransform from_rotation(const Matrix3& r);
  // Rotation vector (axis * angle) in degrees.
  static RigidTransform from_rotation_vector_deg(const Vector3& rotvec_deg,
                                                 const Vector3& t = Vector3::Zero());
  static RigidTransform rot_x(double deg);
  static RigidTransform rot_y(double deg);
  static RigidTransform rot_z(double deg);

  const Matrix3& rotation() const { return rotation_; }
  const Vector3& translation() const { return translation_; }

  // Rotation vector (axis * angle) in degrees, angle in [0, 180].
  Vector3 rotation_vector_deg() const;

  Point3 operator()(const Point3& p) const { return rotation_ * p + translation_; }
  Eigen::Matrix4d matrix() const;

  friend bool operator==(const RigidTransform& a, const RigidTransform& b) {
    return a.rotation_ == b.rotation_ && a.translation_ == b.translation_;
  }

 private:
  Matrix3 rotation_;
  Vector3 translation_;
};

std::ostream& operator<<(std::ostream& os, const RigidTransform& t);

// Max-abs deviation of R^T R from identity.
double orthogonality_error(const Matrix3& r);

// Nearest proper rotation in the Frobenius sense (polar decomposition).
Matrix3 nearest_rotation(const Matrix3& m);

// Result applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);
Point3 apply(const RigidTransform& t, const Point3& p);

// Geodesic angle of the relative rotation R_a R_b^T, degrees in [0, 180].
double rotation_angle_between(const RigidTransform& a, const RigidTransform& b);
double rotation_angle_deg(const Matrix3& r);

// Log map of a rotation, degrees.
Vector3 rotation_log_deg(const Matrix3& r);

inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return compose(a, b);
}

class Line3 {
 public:
  // direction is normalized; throws DegenerateGeometry for a zero vector.
  Line3(const Point3& anchor, const Vector3& direction);

  const Point3& anchor() const { return anchor_; }
  const Vector3& direction() const { return direction_; }

  Point3 at(double t) const { return anchor_ + t * direction_; }
  double parameter_of(const Point3& p) const { return direction_.dot(p - anchor_); }
  double distance_to(const Point3& p) const;

 private:
  Point3 anchor_;
  Vector3 direction_;
};

Line3 transform_line(const RigidTransform& t, const Line3& line);

// Shortest distance between two infinite lines.
double line_to_line_distance(const Line3& a, const Line3& b);

struct PointCloud {
  std::vector<Point3> points;
  std::string frame_label;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

PointCloud transform_cloud(const RigidTransform& t, const PointCloud& cloud,
                           std::string frame_label);

}  // namespace gbec
