#pragma once

#include "gbec/geometry.hpp"
#include "gbec/simulator.hpp"

#include <gtest/gtest.h>

#include <random>

namespace gbec::test {

inline Matrix3 random_rotation_matrix(std::mt19937_64& rng) { return random_rotation(rng); }

// Rotation with angle strictly below max_deg, random axis.
inline Matrix3 random_rotation_below(std::mt19937_64& rng, double max_deg) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, max_deg);
  Vector3 axis(n(rng), n(rng), n(rng));
  axis.normalize();
  return Eigen::AngleAxisd(deg_to_rad(u(rng)), axis).toRotationMatrix();
}

inline RigidTransform random_transform(std::mt19937_64& rng, double max_translation = 200.0) {
  std::uniform_real_distribution<double> u(-max_translation, max_translation);
  return {random_rotation(rng), Vector3(u(rng), u(rng), u(rng))};
}

inline Point3 random_point(std::mt19937_64& rng, double half_width = 100.0) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  return {u(rng), u(rng), u(rng)};
}

inline double translation_error(const RigidTransform& a, const RigidTransform& b) {
  return (a.translation() - b.translation()).norm();
}

inline ::testing::AssertionResult transforms_near(const RigidTransform& a, const RigidTransform& b,
                                                  double tol) {
  const double ang = rotation_angle_between(a, b);
  const double dt = translation_error(a, b);
  if (ang <= tol && dt <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "rotation diff " << ang << " deg, translation diff " << dt
                                       << " mm (tol " << tol << ")";
}

// Random scene whose hand-eye rotation stays clear of 180 degrees.
inline SceneTruth random_scene(std::mt19937_64& rng, AttachmentSpec attachment) {
  SceneTruth s = default_scene(std::move(attachment));
  std::uniform_real_distribution<double> u(-120.0, 120.0);
  s.true_handeye = RigidTransform(random_rotation_below(rng, 150.0), Vector3(u(rng), u(rng), u(rng)));
  s.camera_to_base = RigidTransform(random_rotation(rng), Vector3(u(rng), u(rng), 1500.0 + u(rng)));
  return s;
}

}  // namespace gbec::test
