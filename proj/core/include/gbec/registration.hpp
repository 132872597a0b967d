#pragma once

#include "gbec/geometry.hpp"

#include <cstddef>
#include <vector>

namespace gbec {

// Relative threshold on singular values used to flag collinear or coincident
// point sets.
inline constexpr double kDegeneracyTolerance = 1e-9;

struct RegistrationResult {
  RigidTransform transform;
  std::vector<double> per_point_residuals;  // |model_i - T(measured_i)|, mm
  double rms_residual = 0.0;
};

// Sum of squared distances |model_i - T(measured_i)|^2.
double registration_objective(const RigidTransform& t, const PointCloud& model,
                              const PointCloud& measured);

// Least-squares paired-point registration (SVD of the cross-covariance,
// reflection corrected). Returns T with model_i ~ T(measured_i).
//
// Throws CountMismatch for unequal sizes or fewer than 3 pairs and
// DegenerateGeometry when either cloud is collinear or coincident.
RegistrationResult solve_paired_point(const PointCloud& model, const PointCloud& measured);

struct LineFitResult {
  Line3 line;
  std::vector<double> per_point_distances;
  double mean_distance = 0.0;
};

// Total-least-squares line through the centroid along the principal axis.
// The direction points from the first toward the last input point.
LineFitResult fit_line(const PointCloud& points);

Point3 project_onto_line(const Point3& p, const Line3& line);

// n evenly spaced points on [t_min, t_max] in increasing t.
PointCloud sample_line_segment(const Line3& line, double t_min, double t_max, std::size_t n);

}  // namespace gbec
