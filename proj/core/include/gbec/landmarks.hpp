#pragma once

#include "gbec/geometry.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace gbec {

struct Groove {
  std::string id;
  Line3 line;  // expressed in the end-effector frame
  double t_min = 0.0;
  double t_max = 0.0;

  Point3 start() const { return line.at(t_min); }
  Point3 end() const { return line.at(t_max); }
  double length() const { return t_max - t_min; }
};

struct GrooveModel {
  std::vector<Groove> grooves;
  std::size_t samples_per_groove = 10;

  // Evenly spaced model points of one groove, used as registration targets.
  PointCloud samples(const Groove& g) const;
};

struct PointLandmark {
  std::string id;
  Point3 position;
};

struct PointLandmarkModel {
  std::vector<PointLandmark> landmarks;
};

enum class AttachmentKind { kGrooves, kPoints };

// Attachment geometry in the end-effector (flange) frame. Its origin is the
// flange center by construction.
struct AttachmentSpec {
  std::string name;
  AttachmentKind kind = AttachmentKind::kGrooves;
  std::variant<GrooveModel, PointLandmarkModel> model;
  double radius_mm = 0.0;  // 0 for non-circular models

  const GrooveModel& grooves() const { return std::get<GrooveModel>(model); }
  const PointLandmarkModel& points() const { return std::get<PointLandmarkModel>(model); }
  std::vector<std::string> feature_ids() const;
};

// Throws BadGeometry / DegenerateGeometry / CountMismatch when the attachment breaks
// its invariants (unique ids, non-degenerate extents, >= 3 spread landmarks).
void validate(const AttachmentSpec& spec);

// Landmark i = (radius cos(theta_i), radius sin(theta_i), h_i). Ids are "p1".."pN".
PointLandmarkModel circular_landmarks(double radius, const std::vector<double>& angles_deg,
                                      const std::vector<double>& heights);

// Eight grooves on a circular holder. Sixteen rim landmarks sit at 22.5 deg
// spacing; groove k runs from landmark 2k to landmark 2k+1. Heights may hold
// 2 values (alternating levels) or 16 values (one per landmark).
AttachmentSpec tms_holder_model(double radius, const std::vector<double>& groove_heights);

// The rim landmarks a holder built by tms_holder_model() passes through.
PointLandmarkModel tms_holder_landmarks(double radius, const std::vector<double>& groove_heights);

// Four asymmetric point landmarks. Rejects collinear sets and sets that map
// onto themselves under a nontrivial rotation about the flange z-axis.
AttachmentSpec rdid_model(const std::vector<Point3>& landmark_coords);

AttachmentSpec default_tms_holder();
AttachmentSpec default_rdid();

}  // namespace gbec
