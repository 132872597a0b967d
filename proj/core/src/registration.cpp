#include "gbec/registration.hpp"

#include "gbec/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <sstream>

namespace gbec {
namespace {

Point3 centroid(const std::vector<Point3>& pts) {
  Point3 c = Point3::Zero();
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

Eigen::MatrixX3d centered(const std::vector<Point3>& pts, const Point3& c) {
  Eigen::MatrixX3d m(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(i) = (pts[i] - c).transpose();
  return m;
}

// Collinear sets have a vanishing second singular value; coincident sets
// vanish entirely. Planar sets (third value zero) are fine for registration.
void require_spread(const std::vector<Point3>& pts, const char* which) {
  const Eigen::MatrixX3d m = centered(pts, centroid(pts));
  const Eigen::Vector3d s = Eigen::JacobiSVD<Eigen::MatrixX3d>(m).singularValues();
  if (s(0) < kDegeneracyTolerance) {
    throw Error(ErrorCode::kDegenerateGeometry,
                std::string(which) + " points are coincident");
  }
  if (s(1) < kDegeneracyTolerance * s(0)) {
    throw Error(ErrorCode::kDegenerateGeometry,
                std::string(which) + " points are collinear; rotation about the line is unobservable");
  }
}

}  // namespace

double registration_objective(const RigidTransform& t, const PointCloud& model,
                              const PointCloud& measured) {
  double sum = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    sum += (model.points[i] - t(measured.points[i])).squaredNorm();
  }
  return sum;
}

RegistrationResult solve_paired_point(const PointCloud& model, const PointCloud& measured) {
  if (model.size() != measured.size()) {
    std::ostringstream msg;
    msg << "model has " << model.size() << " points, measured has " << measured.size();
    throw Error(ErrorCode::kCountMismatch, msg.str());
  }
  if (model.size() < 3) {
    throw Error(ErrorCode::kCountMismatch, "paired-point registration needs at least 3 pairs");
  }
  require_spread(model.points, "model");
  require_spread(measured.points, "measured");

  const Point3 cm = centroid(model.points);
  const Point3 cd = centroid(measured.points);
  Matrix3 h = Matrix3::Zero();
  for (std::size_t i = 0; i < model.size(); ++i) {
    h += (measured.points[i] - cd) * (model.points[i] - cm).transpose();
  }

  Eigen::JacobiSVD<Matrix3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix3& u = svd.matrixU();
  const Matrix3& v = svd.matrixV();
  Matrix3 d = Matrix3::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  Matrix3 r = v * d * u.transpose();
  if (orthogonality_error(r) > kRotationTolerance) r = nearest_rotation(r);

  RegistrationResult out{RigidTransform(r, cm - r * cd), {}, 0.0};
  out.per_point_residuals.reserve(model.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double e = (model.points[i] - out.transform(measured.points[i])).norm();
    out.per_point_residuals.push_back(e);
    sq += e * e;
  }
  out.rms_residual = std::sqrt(sq / static_cast<double>(model.size()));
  return out;
}

LineFitResult fit_line(const PointCloud& points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::kDegenerateGeometry, "line fit needs at least 2 points");
  }
  const Point3 c = centroid(points.points);
  const Eigen::MatrixX3d m = centered(points.points, c);
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(m, Eigen::ComputeThinV);
  if (svd.singularValues()(0) < kDegeneracyTolerance) {
    throw Error(ErrorCode::kDegenerateGeometry, "all line points coincide");
  }
  Vector3 dir = svd.matrixV().col(0);
  if (dir.dot(points.points.back() - points.points.front()) < 0.0) dir = -dir;

  LineFitResult out{Line3(c, dir), {}, 0.0};
  out.per_point_distances.reserve(points.size());
  for (const auto& p : points.points) out.per_point_distances.push_back(out.line.distance_to(p));
  out.mean_distance =
      std::accumulate(out.per_point_distances.begin(), out.per_point_distances.end(), 0.0) /
      static_cast<double>(points.size());
  return out;
}

Point3 project_onto_line(const Point3& p, const Line3& line) {
  return line.at(line.parameter_of(p));
}

PointCloud sample_line_segment(const Line3& line, double t_min, double t_max, std::size_t n) {
  if (!(t_max > t_min)) {
    throw Error(ErrorCode::kInvalidRange, "sample range requires t_max > t_min");
  }
  if (n < 2) throw Error(ErrorCode::kInvalidRange, "sample count must be at least 2");
  PointCloud out;
  out.points.reserve(n);
  const double step = (t_max - t_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (i + 1 == n) ? t_max : t_min + step * static_cast<double>(i);
    out.points.push_back(line.at(t));
  }
  return out;
}

}  // namespace gbec
