#pragma once

#include "gbec/campaign.hpp"
#include "gbec/landmarks.hpp"
#include "gbec/pipelines.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gbec::io {

// Digitization file (CSV with '#' header lines):
//   # gbec-digitization v1
//   # attachment: tms_holder
//   # frame: coilRef
//   # points_per_groove: 52
//   feature,index,x_mm,y_mm,z_mm
//   g1,0,<x>,<y>,<z>
void write_digitization(std::ostream& os, const DigitizationSet& dig);
DigitizationSet read_digitization(std::istream& is);
DigitizationSet read_digitization(const std::filesystem::path& path);

// Pose stream: one line per sample, 24 numbers = robot pose then marker pose,
// each as row-major rotation (9) followed by translation (3).
void write_pose_stream(std::ostream& os, const std::vector<PoseSample>& samples);
std::vector<PoseSample> read_pose_stream(std::istream& is);
std::vector<PoseSample> read_pose_stream(const std::filesystem::path& path);

struct TransformRecord {
  RigidTransform transform;
  double rms_residual = 0.0;
  Method method = Method::kGbec;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const TransformRecord&, const TransformRecord&) = default;
};

// YAML document with rotation rows, translation, rms residual, method and a
// metadata block. Doubles are written with 17 significant digits.
std::string format_transform_record(const TransformRecord& rec);
TransformRecord parse_transform_record(const std::string& text);
TransformRecord read_transform_record(const std::filesystem::path& path);

// Attachment spec YAML. Explicit grooves/landmarks, or a template:
//   template: tms_holder   (radius, groove_heights)
//   template: rdid         (landmarks)
std::string format_attachment(const AttachmentSpec& spec);
AttachmentSpec parse_attachment(const std::string& text);
AttachmentSpec read_attachment(const std::filesystem::path& path);
// "builtin:tms_holder", "builtin:rdid" or a file path.
AttachmentSpec resolve_attachment(const std::string& ref, const std::filesystem::path& base_dir);

// Trial archive: JSON Lines, a campaign header line then one line per trial.
struct ArchiveHeader {
  std::string campaign;
  std::uint64_t master_seed = 0;
  std::string attachment;
  RigidTransform truth;
};

std::string format_trial(const TrialReport& report);
TrialReport parse_trial(const std::string& json_line);

void write_archive(std::ostream& os, const CampaignReport& report);
struct Archive {
  ArchiveHeader header;
  std::vector<TrialReport> trials;
};
Archive read_archive(std::istream& is);
Archive read_archive(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// %.17g formatting used by every text writer.
std::string format_double(double v);

}  // namespace gbec::io
