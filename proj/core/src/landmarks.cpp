#include "gbec/landmarks.hpp"

#include "gbec/error.hpp"
#include "gbec/registration.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace gbec {
namespace {

constexpr double kSymmetryTolerance = 1e-6;

void require_not_collinear(const std::vector<Point3>& pts) {
  Point3 c = Point3::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  Eigen::MatrixX3d m(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(i) = (pts[i] - c).transpose();
  const Eigen::Vector3d s = Eigen::JacobiSVD<Eigen::MatrixX3d>(m).singularValues();
  if (s(0) < kDegeneracyTolerance || s(1) < kDegeneracyTolerance * s(0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "landmarks are collinear or coincident");
  }
}

// True when rotating the set about z by some angle in (0, 360) reproduces it.
// Any such symmetry maps landmark 0 onto a landmark j with the same height and
// radius; those candidates are the only angles worth testing.
bool has_z_rotational_symmetry(const std::vector<Point3>& pts) {
  const Point3& a = pts.front();
  for (std::size_t j = 1; j < pts.size(); ++j) {
    const Point3& b = pts[j];
    if (std::abs(a.z() - b.z()) > kSymmetryTolerance) continue;
    if (std::abs(a.head<2>().norm() - b.head<2>().norm()) > kSymmetryTolerance) continue;
    if (a.head<2>().norm() < kSymmetryTolerance) continue;
    const double angle = std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x());
    const Matrix3 r = Eigen::AngleAxisd(angle, Vector3::UnitZ()).toRotationMatrix();
    const bool maps = std::all_of(pts.begin(), pts.end(), [&](const Point3& p) {
      const Point3 q = r * p;
      return std::any_of(pts.begin(), pts.end(), [&](const Point3& o) {
        return (q - o).norm() < kSymmetryTolerance;
      });
    });
    if (maps) return true;
  }
  return false;
}

std::vector<double> expand_heights(const std::vector<double>& heights) {
  if (heights.size() == 16) return heights;
  if (heights.size() == 2) {
    std::vector<double> out(16);
    for (std::size_t i = 0; i < 16; ++i) out[i] = heights[i % 2];
    return out;
  }
  throw Error(ErrorCode::kCountMismatch, "groove heights must have 2 or 16 entries");
}

}  // namespace

PointCloud GrooveModel::samples(const Groove& g) const {
  return sample_line_segment(g.line, g.t_min, g.t_max, samples_per_groove);
}

std::vector<std::string> AttachmentSpec::feature_ids() const {
  std::vector<std::string> ids;
  if (kind == AttachmentKind::kGrooves) {
    for (const auto& g : grooves().grooves) ids.push_back(g.id);
  } else {
    for (const auto& l : points().landmarks) ids.push_back(l.id);
  }
  return ids;
}

void validate(const AttachmentSpec& spec) {
  const auto ids = spec.feature_ids();
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
    throw Error(ErrorCode::kBadGeometry, "attachment '" + spec.name + "' has duplicate feature ids");
  }
  if (spec.kind == AttachmentKind::kGrooves) {
    const auto& gm = spec.grooves();
    if (gm.grooves.empty()) throw Error(ErrorCode::kBadGeometry, "groove model has no grooves");
    if (gm.samples_per_groove < 2) {
      throw Error(ErrorCode::kBadGeometry, "samples_per_groove must be at least 2");
    }
    std::vector<Point3> all;
    for (const auto& g : gm.grooves) {
      if (!(g.t_max - g.t_min > kDegeneracyTolerance)) {
        throw Error(ErrorCode::kBadGeometry, "groove '" + g.id + "' has a degenerate extent");
      }
      all.push_back(g.start());
      all.push_back(g.end());
    }
    require_not_collinear(all);
  } else {
    const auto& pm = spec.points();
    if (pm.landmarks.size() < 3) {
      throw Error(ErrorCode::kCountMismatch, "point landmark model needs at least 3 landmarks");
    }
    std::vector<Point3> pts;
    for (const auto& l : pm.landmarks) pts.push_back(l.position);
    require_not_collinear(pts);
  }
}

PointLandmarkModel circular_landmarks(double radius, const std::vector<double>& angles_deg,
                                      const std::vector<double>& heights) {
  if (angles_deg.size() != heights.size()) {
    throw Error(ErrorCode::kCountMismatch, "angle and height lists differ in length");
  }
  if (angles_deg.size() < 3) {
    throw Error(ErrorCode::kCountMismatch, "at least 3 landmarks are required");
  }
  if (!(radius > 0.0)) throw Error(ErrorCode::kNonPositiveRadius, "radius must be positive");
  PointLandmarkModel out;
  for (std::size_t i = 0; i < angles_deg.size(); ++i) {
    const double th = deg_to_rad(angles_deg[i]);
    out.landmarks.push_back(
        {"p" + std::to_string(i + 1), Point3(radius * std::cos(th), radius * std::sin(th), heights[i])});
  }
  return out;
}

PointLandmarkModel tms_holder_landmarks(double radius, const std::vector<double>& groove_heights) {
  std::vector<double> angles(16);
  for (std::size_t i = 0; i < 16; ++i) angles[i] = 22.5 * static_cast<double>(i);
  return circular_landmarks(radius, angles, expand_heights(groove_heights));
}

AttachmentSpec tms_holder_model(double radius, const std::vector<double>& groove_heights) {
  const PointLandmarkModel rim = tms_holder_landmarks(radius, groove_heights);
  GrooveModel gm;
  gm.samples_per_groove = 10;
  for (std::size_t k = 0; k < 8; ++k) {
    const Point3& a = rim.landmarks[2 * k].position;
    const Point3& b = rim.landmarks[2 * k + 1].position;
    const double len = (b - a).norm();
    if (len < kDegeneracyTolerance) {
      throw Error(ErrorCode::kBadGeometry, "groove " + std::to_string(k + 1) + " endpoints coincide");
    }
    gm.grooves.push_back({"g" + std::to_string(k + 1), Line3(a, b - a), 0.0, len});
  }
  AttachmentSpec spec{"tms_holder", AttachmentKind::kGrooves, std::move(gm), radius};
  validate(spec);
  return spec;
}

AttachmentSpec rdid_model(const std::vector<Point3>& landmark_coords) {
  if (landmark_coords.size() != 4) {
    throw Error(ErrorCode::kCountMismatch, "RDID model takes exactly 4 landmarks");
  }
  require_not_collinear(landmark_coords);
  if (has_z_rotational_symmetry(landmark_coords)) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "landmarks are rotationally symmetric about the flange z-axis");
  }
  PointLandmarkModel pm;
  for (std::size_t i = 0; i < landmark_coords.size(); ++i) {
    pm.landmarks.push_back({"l" + std::to_string(i + 1), landmark_coords[i]});
  }
  return {"rdid", AttachmentKind::kPoints, std::move(pm), 0.0};
}

AttachmentSpec default_tms_holder() { return tms_holder_model(40.0, {0.0, 12.0}); }

AttachmentSpec default_rdid() {
  return rdid_model({Point3(35.0, 10.0, 22.0), Point3(-18.0, 41.0, 30.0),
                     Point3(-27.0, -33.0, 12.0), Point3(12.0, -46.0, 48.0)});
}

}  // namespace gbec
