#include "gbec/io.hpp"

#include "gbec/error.hpp"
#include "yaml_util.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gbec::io {
namespace {

using nlohmann::json;
using detail::check_keys;
using detail::parse_numbers;
using detail::parse_quantity;
using detail::parse_string;
using detail::parse_vector;
using detail::require;

constexpr ErrorCode kParse = ErrorCode::kParseError;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(kParse, "line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) parse_fail(line, "'" + tok + "' is not a number");
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return in;
}

std::string vec_text(const Vector3& v, const char* unit) {
  return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z()) + " " + unit;
}

json transform_json(const RigidTransform& t) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    rot.push_back({t.rotation()(r, 0), t.rotation()(r, 1), t.rotation()(r, 2)});
  }
  return {{"rotation", rot},
          {"translation", {t.translation().x(), t.translation().y(), t.translation().z()}}};
}

RigidTransform transform_from_json(const json& j) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) r(i, k) = j.at("rotation").at(i).at(k).get<double>();
  }
  const auto& t = j.at("translation");
  return {r, Vector3(t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>())};
}

json vec_json(const Vector3& v) { return {v.x(), v.y(), v.z()}; }
Vector3 vec_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

json digitization_json(const DigitizationSet& dig) {
  json features = json::array();
  for (const auto& f : dig.features) {
    json pts = json::array();
    for (const auto& p : f.cloud.points) pts.push_back(vec_json(p));
    features.push_back({{"id", f.id}, {"points", pts}});
  }
  return {{"attachment", dig.attachment}, {"frame", dig.frame},
          {"points_per_groove", dig.points_per_groove}, {"features", features}};
}

DigitizationSet digitization_from_json(const json& j) {
  DigitizationSet dig;
  dig.attachment = j.at("attachment").get<std::string>();
  dig.frame = j.at("frame").get<std::string>();
  dig.points_per_groove = j.at("points_per_groove").get<std::size_t>();
  for (const auto& f : j.at("features")) {
    DigitizedFeature df{f.at("id").get<std::string>(), {{}, dig.frame}};
    for (const auto& p : f.at("points")) df.cloud.points.push_back(vec_from_json(p));
    dig.features.push_back(std::move(df));
  }
  return dig;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIoError, "cannot rename into '" + path.string() + "': " + ec.message());
  }
}

// ---- digitization ---------------------------------------------------------

void write_digitization(std::ostream& os, const DigitizationSet& dig) {
  os << "# gbec-digitization v1\n";
  os << "# attachment: " << dig.attachment << "\n";
  os << "# frame: " << dig.frame << "\n";
  os << "# points_per_groove: " << dig.points_per_groove << "\n";
  os << "feature,index,x_mm,y_mm,z_mm\n";
  for (const auto& f : dig.features) {
    for (std::size_t i = 0; i < f.cloud.size(); ++i) {
      const auto& p = f.cloud.points[i];
      os << f.id << ',' << i << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
         << format_double(p.z()) << '\n';
    }
  }
}

DigitizationSet read_digitization(std::istream& is) {
  DigitizationSet dig;
  dig.frame.clear();
  bool saw_columns = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(1, colon - 1));
      const std::string value = trim(line.substr(colon + 1));
      if (key == "attachment") dig.attachment = value;
      else if (key == "frame") dig.frame = value;
      else if (key == "points_per_groove") dig.points_per_groove = static_cast<std::size_t>(to_double(value, lineno));
      continue;
    }
    if (!saw_columns) {
      if (line != "feature,index,x_mm,y_mm,z_mm") parse_fail(lineno, "expected column header 'feature,index,x_mm,y_mm,z_mm'");
      saw_columns = true;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(trim(c));
    if (cols.size() != 5) parse_fail(lineno, "expected 5 comma-separated fields");
    if (cols[0].empty()) parse_fail(lineno, "empty feature id");
    const double index = to_double(cols[1], lineno);
    const Point3 p(to_double(cols[2], lineno), to_double(cols[3], lineno), to_double(cols[4], lineno));
    if (!p.allFinite()) parse_fail(lineno, "non-finite coordinate");
    DigitizedFeature* f = nullptr;
    for (auto& existing : dig.features) {
      if (existing.id == cols[0]) f = &existing;
    }
    if (f == nullptr) {
      dig.features.push_back({cols[0], {{}, ""}});
      f = &dig.features.back();
    }
    if (index != static_cast<double>(f->cloud.size())) {
      parse_fail(lineno, "point index for '" + cols[0] + "' must be " + std::to_string(f->cloud.size()));
    }
    f->cloud.points.push_back(p);
  }
  if (!saw_columns) throw Error(kParse, "digitization file has no column header");
  if (dig.frame.empty()) throw Error(kParse, "digitization header is missing 'frame'");
  if (dig.attachment.empty()) throw Error(kParse, "digitization header is missing 'attachment'");
  for (auto& f : dig.features) f.cloud.frame_label = dig.frame;
  return dig;
}

DigitizationSet read_digitization(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_digitization(in);
}

// ---- pose streams ---------------------------------------------------------

void write_pose_stream(std::ostream& os, const std::vector<PoseSample>& samples) {
  os << "# gbec-poses v1\n";
  os << "# robot_pose (base->eff): r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz, "
        "marker_pose (camera->marker): same layout\n";
  auto emit = [&](const RigidTransform& t) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) os << format_double(t.rotation()(r, c)) << ' ';
    }
    os << format_double(t.translation().x()) << ' ' << format_double(t.translation().y()) << ' '
       << format_double(t.translation().z());
  };
  for (const auto& s : samples) {
    emit(s.robot_pose);
    os << ' ';
    emit(s.marker_pose);
    os << '\n';
  }
}

std::vector<PoseSample> read_pose_stream(std::istream& is) {
  std::vector<PoseSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> v;
    for (std::string tok; ss >> tok;) v.push_back(to_double(tok, lineno));
    if (v.size() != 24) parse_fail(lineno, "expected 24 numbers, got " + std::to_string(v.size()));
    auto make = [&](std::size_t o) {
      Matrix3 r;
      r << v[o], v[o + 1], v[o + 2], v[o + 3], v[o + 4], v[o + 5], v[o + 6], v[o + 7], v[o + 8];
      try {
        return RigidTransform(r, Vector3(v[o + 9], v[o + 10], v[o + 11]));
      } catch (const Error& e) {
        parse_fail(lineno, e.what());
      }
    };
    out.push_back({make(0), make(12)});
  }
  return out;
}

std::vector<PoseSample> read_pose_stream(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_pose_stream(in);
}

// ---- transform records ----------------------------------------------------

std::string format_transform_record(const TransformRecord& rec) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << "gbec-transform/1";
  out << YAML::Key << "method" << YAML::Value << std::string(to_string(rec.method));
  out << YAML::Key << "rotation" << YAML::Value << YAML::BeginSeq;
  for (int r = 0; r < 3; ++r) {
    out << YAML::Flow << YAML::BeginSeq;
    for (int c = 0; c < 3; ++c) out << rec.transform.rotation()(r, c);
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "translation_mm" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << rec.transform.translation().x() << rec.transform.translation().y()
      << rec.transform.translation().z() << YAML::EndSeq;
  out << YAML::Key << "rms_residual_mm" << YAML::Value << rec.rms_residual;
  out << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : rec.metadata) out << YAML::Key << k << YAML::Value << v;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

TransformRecord parse_transform_record(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(kParse, e.what());
  }
  check_keys(kParse, root, {"format", "method", "rotation", "translation_mm", "rms_residual_mm", "metadata"});
  if (parse_string(kParse, require(kParse, root, "format")) != "gbec-transform/1") {
    detail::fail(kParse, root["format"], "unsupported transform format");
  }
  TransformRecord rec;
  rec.method = method_from_string(parse_string(kParse, require(kParse, root, "method")));
  const YAML::Node rot = require(kParse, root, "rotation");
  if (!rot.IsSequence() || rot.size() != 3) detail::fail(kParse, rot, "rotation must have 3 rows");
  Matrix3 r;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!rot[i].IsSequence() || rot[i].size() != 3) detail::fail(kParse, rot[i], "rotation row must have 3 values");
    for (std::size_t k = 0; k < 3; ++k) r(i, k) = rot[i][k].as<double>();
  }
  const YAML::Node t = require(kParse, root, "translation_mm");
  if (!t.IsSequence() || t.size() != 3) detail::fail(kParse, t, "translation_mm must have 3 values");
  try {
    rec.transform = RigidTransform(r, Vector3(t[0].as<double>(), t[1].as<double>(), t[2].as<double>()));
  } catch (const Error& e) {
    detail::fail(kParse, rot, e.what());
  }
  rec.rms_residual = require(kParse, root, "rms_residual_mm").as<double>();
  if (const YAML::Node md = root["metadata"]) {
    for (const auto& kv : md) rec.metadata[kv.first.as<std::string>()] = kv.second.as<std::string>();
  }
  return rec;
}

TransformRecord read_transform_record(const std::filesystem::path& path) {
  return parse_transform_record(read_text_file(path));
}

// ---- attachment specs -----------------------------------------------------

std::string format_attachment(const AttachmentSpec& spec) {
  std::ostringstream os;
  os << "name: " << spec.name << "\n";
  if (spec.kind == AttachmentKind::kGrooves) {
    os << "kind: grooves\n";
    if (spec.radius_mm > 0.0) os << "radius: " << format_double(spec.radius_mm) << " mm\n";
    os << "samples_per_groove: " << spec.grooves().samples_per_groove << "\n";
    os << "grooves:\n";
    for (const auto& g : spec.grooves().grooves) {
      os << "  - id: " << g.id << "\n";
      os << "    anchor: " << vec_text(g.line.anchor(), "mm") << "\n";
      os << "    direction: " << format_double(g.line.direction().x()) << ' '
         << format_double(g.line.direction().y()) << ' ' << format_double(g.line.direction().z()) << "\n";
      os << "    extent: " << format_double(g.t_min) << ' ' << format_double(g.t_max) << " mm\n";
    }
  } else {
    os << "kind: points\n";
    if (spec.radius_mm > 0.0) os << "radius: " << format_double(spec.radius_mm) << " mm\n";
    os << "landmarks:\n";
    for (const auto& l : spec.points().landmarks) {
      os << "  - id: " << l.id << "\n";
      os << "    position: " << vec_text(l.position, "mm") << "\n";
    }
  }
  return os.str();
}

AttachmentSpec parse_attachment(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(kParse, e.what());
  }
  if (!root.IsMap()) throw Error(kParse, "attachment spec must be a mapping");

  if (const YAML::Node tmpl = root["template"]) {
    const std::string kind = parse_string(kParse, tmpl);
    AttachmentSpec spec;
    if (kind == "tms_holder") {
      check_keys(kParse, root, {"template", "name", "radius", "groove_heights"});
      spec = tms_holder_model(parse_quantity(kParse, require(kParse, root, "radius"), "mm"),
                              parse_numbers(kParse, require(kParse, root, "groove_heights"), "mm"));
    } else if (kind == "rdid") {
      check_keys(kParse, root, {"template", "name", "landmarks"});
      const YAML::Node lms = require(kParse, root, "landmarks");
      if (!lms.IsSequence()) detail::fail(kParse, lms, "landmarks must be a list");
      std::vector<Point3> pts;
      for (const auto& n : lms) pts.push_back(parse_vector(kParse, n, "mm"));
      spec = rdid_model(pts);
    } else {
      detail::fail(kParse, tmpl, "unknown template '" + kind + "'");
    }
    if (root["name"]) spec.name = parse_string(kParse, root["name"]);
    return spec;
  }

  check_keys(kParse, root, {"name", "kind", "radius", "samples_per_groove", "grooves", "landmarks"});
  AttachmentSpec spec;
  spec.name = parse_string(kParse, require(kParse, root, "name"));
  if (root["radius"]) spec.radius_mm = parse_quantity(kParse, root["radius"], "mm");
  const std::string kind = parse_string(kParse, require(kParse, root, "kind"));
  if (kind == "grooves") {
    spec.kind = AttachmentKind::kGrooves;
    GrooveModel gm;
    if (root["samples_per_groove"]) gm.samples_per_groove = detail::parse_count(kParse, root["samples_per_groove"]);
    const YAML::Node grooves = require(kParse, root, "grooves");
    if (!grooves.IsSequence()) detail::fail(kParse, grooves, "grooves must be a list");
    for (const auto& g : grooves) {
      check_keys(kParse, g, {"id", "anchor", "direction", "extent"});
      const auto ext = parse_numbers(kParse, require(kParse, g, "extent"), "mm", 2);
      try {
        gm.grooves.push_back({parse_string(kParse, require(kParse, g, "id")),
                              Line3(parse_vector(kParse, require(kParse, g, "anchor"), "mm"),
                                    parse_vector(kParse, require(kParse, g, "direction"), "")),
                              ext[0], ext[1]});
      } catch (const Error& e) {
        if (e.code() == kParse) throw;
        detail::fail(kParse, g, e.what());
      }
    }
    spec.model = std::move(gm);
  } else if (kind == "points") {
    spec.kind = AttachmentKind::kPoints;
    PointLandmarkModel pm;
    const YAML::Node lms = require(kParse, root, "landmarks");
    if (!lms.IsSequence()) detail::fail(kParse, lms, "landmarks must be a list");
    for (const auto& l : lms) {
      check_keys(kParse, l, {"id", "position"});
      pm.landmarks.push_back({parse_string(kParse, require(kParse, l, "id")),
                              parse_vector(kParse, require(kParse, l, "position"), "mm")});
    }
    spec.model = std::move(pm);
  } else {
    detail::fail(kParse, root["kind"], "kind must be 'grooves' or 'points'");
  }
  validate(spec);
  return spec;
}

AttachmentSpec read_attachment(const std::filesystem::path& path) {
  try {
    return parse_attachment(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

AttachmentSpec resolve_attachment(const std::string& ref, const std::filesystem::path& base_dir) {
  if (ref == "builtin:tms_holder") return default_tms_holder();
  if (ref == "builtin:rdid") return default_rdid();
  std::filesystem::path p(ref);
  if (p.is_relative()) p = base_dir / p;
  return read_attachment(p);
}

// ---- archive --------------------------------------------------------------

std::string format_trial(const TrialReport& report) {
  const CalibrationTrial& t = report.trial;
  json j;
  j["type"] = "trial";
  j["campaign"] = t.metadata.campaign;
  j["index"] = t.metadata.trial_index;
  j["method"] = std::string(to_string(t.method));
  j["workspace"] = t.metadata.workspace;
  j["seed"] = t.metadata.seed;
  j["transform"] = transform_json(t.result);
  if (t.registration) {
    j["rms_residual"] = t.registration->rms_residual;
    j["per_point_residuals"] = t.registration->per_point_residuals;
  }
  json features = json::array();
  for (const auto& f : t.feature_residuals) features.push_back({{"id", f.id}, {"residuals", f.residuals}});
  j["features"] = features;
  json fits = json::array();
  for (const auto& f : t.line_fits) {
    fits.push_back({{"id", f.id},
                    {"anchor", vec_json(f.fit.line.anchor())},
                    {"direction", vec_json(f.fit.line.direction())},
                    {"t_first", f.t_first},
                    {"t_last", f.t_last},
                    {"distances", f.fit.per_point_distances}});
  }
  j["line_fits"] = fits;
  if (t.axxb) {
    j["axxb"] = {{"pair_count", t.axxb->pair_count},
                 {"rotation_rms_deg", t.axxb->rotation_rms_deg},
                 {"translation_rms_mm", t.axxb->translation_rms_mm}};
  }
  if (report.regression) {
    json reg = json::array();
    for (const auto& g : report.regression->grooves) reg.push_back({{"id", g.id}, {"distances", g.distances}});
    j["regression"] = reg;
  }
  if (report.fle) {
    json fle = json::array();
    for (const auto& f : report.fle->features) {
      fle.push_back({{"id", f.id}, {"pre", f.pre_correction}, {"post", f.post_correction}});
    }
    j["fle"] = fle;
  }
  if (!report.fle_truth.empty()) {
    json ft = json::array();
    for (const auto& f : report.fle_truth) {
      ft.push_back({{"id", f.id}, {"mean_pre", f.mean_pre}, {"mean_post", f.mean_post},
                    {"reduction_percent", f.reduction_percent}});
    }
    j["fle_truth"] = ft;
  }
  if (report.alignment) {
    j["alignment"] = {{"translation_mm", vec_json(report.alignment->translation_mm)},
                      {"rotation_deg", vec_json(report.alignment->rotation_deg)}};
  }
  if (report.digitization) j["digitization"] = digitization_json(*report.digitization);
  return j.dump();
}

TrialReport parse_trial(const std::string& json_line) {
  TrialReport report;
  try {
    const json j = json::parse(json_line);
    if (j.at("type") != "trial") throw Error(kParse, "record is not a trial");
    CalibrationTrial& t = report.trial;
    t.method = method_from_string(j.at("method").get<std::string>());
    t.metadata = {j.at("campaign").get<std::string>(), j.at("index").get<std::size_t>(),
                  j.at("workspace").get<std::string>(), j.at("seed").get<std::uint64_t>()};
    t.result = transform_from_json(j.at("transform"));
    if (j.contains("per_point_residuals")) {
      RegistrationResult reg{t.result, j.at("per_point_residuals").get<std::vector<double>>(),
                             j.at("rms_residual").get<double>()};
      t.registration = std::move(reg);
    }
    for (const auto& f : j.at("features")) {
      FeatureResidual fr{f.at("id").get<std::string>(), f.at("residuals").get<std::vector<double>>(), 0.0};
      fr.mean = mean_of(fr.residuals);
      t.feature_residuals.push_back(std::move(fr));
    }
    for (const auto& f : j.at("line_fits")) {
      LineFitResult fit{Line3(vec_from_json(f.at("anchor")), vec_from_json(f.at("direction"))),
                        f.at("distances").get<std::vector<double>>(), 0.0};
      fit.mean_distance = mean_of(fit.per_point_distances);
      t.line_fits.push_back({f.at("id").get<std::string>(), std::move(fit),
                             f.at("t_first").get<double>(), f.at("t_last").get<double>()});
    }
    if (j.contains("axxb")) {
      const auto& a = j.at("axxb");
      t.axxb = AxxbDiagnostics{a.at("pair_count").get<std::size_t>(), a.at("rotation_rms_deg").get<double>(),
                               a.at("translation_rms_mm").get<double>()};
    }
    if (j.contains("regression")) {
      LineRegressionReport reg;
      std::vector<double> means;
      for (const auto& g : j.at("regression")) {
        GrooveRegression gr{g.at("id").get<std::string>(), g.at("distances").get<std::vector<double>>(), {}};
        gr.stats = sample_stats(gr.distances);
        means.push_back(gr.stats.mean);
        reg.grooves.push_back(std::move(gr));
      }
      reg.trial_mean = mean_of(means);
      report.regression = std::move(reg);
    }
    if (j.contains("fle")) {
      FleReport fle;
      for (const auto& f : j.at("fle")) {
        FeatureFle fe;
        fe.id = f.at("id").get<std::string>();
        fe.pre_correction = f.at("pre").get<std::vector<double>>();
        fe.post_correction = f.at("post").get<std::vector<double>>();
        fe.mean_pre = mean_of(fe.pre_correction);
        fe.mean_post = mean_of(fe.post_correction);
        fe.reduction_percent = fe.mean_pre > kFleResolution ? 100.0 * (fe.mean_pre - fe.mean_post) / fe.mean_pre : 0.0;
        fle.features.push_back(std::move(fe));
      }
      report.fle = std::move(fle);
    }
    if (j.contains("fle_truth")) {
      for (const auto& f : j.at("fle_truth")) {
        report.fle_truth.push_back({f.at("id").get<std::string>(), f.at("mean_pre").get<double>(),
                                    f.at("mean_post").get<double>(), f.at("reduction_percent").get<double>()});
      }
    }
    if (j.contains("alignment")) {
      const auto& a = j.at("alignment");
      report.alignment = AlignmentError{vec_from_json(a.at("translation_mm")), vec_from_json(a.at("rotation_deg"))};
    }
    if (j.contains("digitization")) report.digitization = digitization_from_json(j.at("digitization"));
  } catch (const json::exception& e) {
    throw Error(kParse, std::string("malformed trial record: ") + e.what());
  }
  return report;
}

void write_archive(std::ostream& os, const CampaignReport& report) {
  json header = {{"type", "campaign"},
                 {"format", "gbec-archive/1"},
                 {"campaign", report.campaign},
                 {"master_seed", report.master_seed},
                 {"attachment", report.attachment},
                 {"truth", transform_json(report.truth)}};
  os << header.dump() << '\n';
  for (const auto& t : report.trials) os << format_trial(t) << '\n';
}

Archive read_archive(std::istream& is) {
  Archive a;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (!have_header) {
      try {
        const json h = json::parse(line);
        if (h.at("type") != "campaign") parse_fail(lineno, "first record must be the campaign header");
        a.header = {h.at("campaign").get<std::string>(), h.at("master_seed").get<std::uint64_t>(),
                    h.at("attachment").get<std::string>(), transform_from_json(h.at("truth"))};
      } catch (const json::exception& e) {
        parse_fail(lineno, std::string("malformed archive header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    try {
      a.trials.push_back(parse_trial(line));
    } catch (const Error& e) {
      parse_fail(lineno, e.what());
    }
  }
  if (!have_header) throw Error(kParse, "archive is empty (no trials)");
  return a;
}

Archive read_archive(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_archive(in);
}

}  // namespace gbec::io
