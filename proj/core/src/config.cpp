#include "gbec/config.hpp"

#include "gbec/error.hpp"
#include "gbec/io.hpp"
#include "yaml_util.hpp"

#include <yaml-cpp/yaml.h>

#include <sstream>

namespace gbec {
namespace {

using detail::check_keys;
using detail::parse_count;
using detail::parse_quantity;
using detail::parse_string;
using detail::parse_vector;
using detail::require;

constexpr ErrorCode kCfg = ErrorCode::kConfigInvalid;

RigidTransform parse_pose(const YAML::Node& node) {
  check_keys(kCfg, node, {"rotation_vector", "translation"});
  const Vector3 rv = parse_vector(kCfg, require(kCfg, node, "rotation_vector"), "deg");
  const Vector3 t = parse_vector(kCfg, require(kCfg, node, "translation"), "mm");
  return RigidTransform::from_rotation_vector_deg(rv, t);
}

std::string pose_text(const RigidTransform& t, const std::string& indent) {
  const Vector3 rv = t.rotation_vector_deg();
  std::ostringstream os;
  os << indent << "rotation_vector: " << io::format_double(rv.x()) << ' ' << io::format_double(rv.y()) << ' '
     << io::format_double(rv.z()) << " deg\n";
  os << indent << "translation: " << io::format_double(t.translation().x()) << ' '
     << io::format_double(t.translation().y()) << ' ' << io::format_double(t.translation().z()) << " mm\n";
  return os.str();
}

bool parse_bool(const YAML::Node& node) {
  const std::string s = parse_string(kCfg, node);
  if (s == "true") return true;
  if (s == "false") return false;
  detail::fail(kCfg, node, "expected true or false");
}

// Wraps non-config errors raised while building values (invalid transforms,
// bad attachment files) so every failure reports as ConfigInvalid.
template <typename F>
auto as_config_error(const YAML::Node& node, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == kCfg) throw;
    detail::fail(kCfg, node, e.what());
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(kCfg, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw Error(kCfg, "config must be a mapping");
  check_keys(kCfg, root,
             {"campaign", "master_seed", "threads", "scene", "noise", "digitization", "workspaces", "trials",
              "axxb_pairing", "robot_offset", "alignments", "output", "export_digitizations"});

  ExperimentConfig cfg;
  cfg.campaign = parse_string(kCfg, require(kCfg, root, "campaign"));
  {
    const YAML::Node n = require(kCfg, root, "master_seed");
    try {
      cfg.master_seed = n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      detail::fail(kCfg, n, "master_seed must be a non-negative integer");
    }
  }
  if (root["threads"]) cfg.threads = parse_count(kCfg, root["threads"]);

  const YAML::Node scene = require(kCfg, root, "scene");
  check_keys(kCfg, scene, {"attachment", "handeye", "camera_to_base"});
  {
    const YAML::Node att = require(kCfg, scene, "attachment");
    cfg.attachment_ref = parse_string(kCfg, att);
    cfg.scene = default_scene(as_config_error(att, [&] { return io::resolve_attachment(cfg.attachment_ref, base_dir); }));
  }
  if (scene["handeye"]) cfg.scene.true_handeye = as_config_error(scene["handeye"], [&] { return parse_pose(scene["handeye"]); });
  if (scene["camera_to_base"]) {
    cfg.scene.camera_to_base = as_config_error(scene["camera_to_base"], [&] { return parse_pose(scene["camera_to_base"]); });
  }

  if (const YAML::Node noise = root["noise"]) {
    check_keys(kCfg, noise,
               {"tracker_sigma", "tracker_rotation_sigma", "stroke_sigma", "jitter_fraction",
                "robot_translation_sigma", "robot_rotation_sigma", "feature_sigma_multiplier"});
    auto opt = [&](const char* key, const char* unit, double& dst) {
      if (noise[key]) {
        dst = parse_quantity(kCfg, noise[key], unit);
        if (dst < 0.0) detail::fail(kCfg, noise[key], std::string(key) + " must be >= 0");
      }
    };
    opt("tracker_sigma", "mm", cfg.noise.tracker_sigma);
    opt("tracker_rotation_sigma", "deg", cfg.noise.tracker_rotation_sigma);
    opt("stroke_sigma", "mm", cfg.noise.stroke_sigma);
    opt("jitter_fraction", "", cfg.noise.jitter_fraction);
    opt("robot_translation_sigma", "mm", cfg.noise.robot_translation_sigma);
    opt("robot_rotation_sigma", "deg", cfg.noise.robot_rotation_sigma);
    if (const YAML::Node m = noise["feature_sigma_multiplier"]) {
      if (!m.IsMap()) detail::fail(kCfg, m, "feature_sigma_multiplier must be a mapping");
      const auto ids = cfg.scene.attachment.feature_ids();
      for (const auto& kv : m) {
        const std::string id = kv.first.as<std::string>();
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
          detail::fail(kCfg, kv.first, "unknown feature '" + id + "' in feature_sigma_multiplier");
        }
        const double v = parse_quantity(kCfg, kv.second, "");
        if (v < 0.0) detail::fail(kCfg, kv.second, "multiplier must be >= 0");
        cfg.noise.feature_sigma_multiplier[id] = v;
      }
    }
  }

  if (const YAML::Node dig = root["digitization"]) {
    check_keys(kCfg, dig, {"points_per_groove", "touches_per_landmark"});
    if (dig["points_per_groove"]) cfg.digitization.points_per_groove = parse_count(kCfg, dig["points_per_groove"]);
    if (dig["touches_per_landmark"]) {
      cfg.digitization.touches_per_landmark = parse_count(kCfg, dig["touches_per_landmark"]);
    }
  }

  const YAML::Node wss = require(kCfg, root, "workspaces");
  if (!wss.IsSequence() || wss.size() == 0) detail::fail(kCfg, wss, "workspaces must be a non-empty list");
  for (const auto& w : wss) {
    check_keys(kCfg, w, {"name", "center", "diameter", "orientation_range", "poses"});
    WorkspaceSpec ws;
    ws.name = parse_string(kCfg, require(kCfg, w, "name"));
    ws.center = parse_vector(kCfg, require(kCfg, w, "center"), "mm");
    if (w["diameter"]) ws.diameter = parse_quantity(kCfg, w["diameter"], "mm");
    if (w["orientation_range"]) ws.orientation_range = parse_quantity(kCfg, w["orientation_range"], "deg");
    if (w["poses"]) ws.n_poses = parse_count(kCfg, w["poses"]);
    // Point at the offending key; validate() below only knows the values.
    if (w["diameter"] && !(ws.diameter > 0.0)) detail::fail(kCfg, w["diameter"], "diameter must be > 0");
    if (w["orientation_range"] && !(ws.orientation_range > 0.0 && ws.orientation_range < 90.0)) {
      detail::fail(kCfg, w["orientation_range"], "orientation_range must be in (0, 90) deg");
    }
    if (w["poses"] && ws.n_poses < 3) detail::fail(kCfg, w["poses"], "poses must be >= 3");
    as_config_error(w, [&] {
      validate(ws);
      return 0;
    });
    cfg.workspaces.push_back(ws);
  }

  const YAML::Node trials = require(kCfg, root, "trials");
  check_keys(kCfg, trials, {"gbec", "axxb"});
  if (trials["gbec"]) cfg.gbec_trials = parse_count(kCfg, trials["gbec"]);
  if (trials["axxb"]) cfg.axxb_trials = parse_count(kCfg, trials["axxb"]);
  if (cfg.gbec_trials + cfg.axxb_trials == 0) detail::fail(kCfg, trials, "trial counts must sum to >= 1");

  if (root["axxb_pairing"]) {
    cfg.pairing = as_config_error(root["axxb_pairing"],
                                  [&] { return pairing_from_string(parse_string(kCfg, root["axxb_pairing"])); });
  }
  if (const YAML::Node off = root["robot_offset"]) {
    check_keys(kCfg, off, {"compliance"});
    cfg.offset_compliance = parse_quantity(kCfg, require(kCfg, off, "compliance"), "");
    if (cfg.offset_compliance < 0.0) detail::fail(kCfg, off, "compliance must be >= 0");
  }
  if (root["alignments"]) cfg.alignments = parse_count(kCfg, root["alignments"]);
  if (root["output"]) cfg.output_dir = parse_string(kCfg, root["output"]);
  if (root["export_digitizations"]) cfg.export_digitizations = parse_bool(root["export_digitizations"]);

  as_config_error(root, [&] {
    validate(cfg);
    return 0;
  });
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text_file(path);
  } catch (const Error& e) {
    throw Error(kCfg, e.what());
  }
  try {
    return parse_experiment_config(text, path.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

std::string format_experiment_config(const ExperimentConfig& c) {
  using io::format_double;
  std::ostringstream os;
  os << "campaign: " << c.campaign << "\n";
  os << "master_seed: " << c.master_seed << "\n";
  os << "threads: " << c.threads << "\n";
  os << "scene:\n";
  os << "  attachment: " << (c.attachment_ref.empty() ? "builtin:tms_holder" : c.attachment_ref) << "\n";
  os << "  handeye:\n" << pose_text(c.scene.true_handeye, "    ");
  os << "  camera_to_base:\n" << pose_text(c.scene.camera_to_base, "    ");
  os << "noise:\n";
  os << "  tracker_sigma: " << format_double(c.noise.tracker_sigma) << " mm\n";
  os << "  tracker_rotation_sigma: " << format_double(c.noise.tracker_rotation_sigma) << " deg\n";
  os << "  stroke_sigma: " << format_double(c.noise.stroke_sigma) << " mm\n";
  os << "  jitter_fraction: " << format_double(c.noise.jitter_fraction) << "\n";
  os << "  robot_translation_sigma: " << format_double(c.noise.robot_translation_sigma) << " mm\n";
  os << "  robot_rotation_sigma: " << format_double(c.noise.robot_rotation_sigma) << " deg\n";
  if (!c.noise.feature_sigma_multiplier.empty()) {
    os << "  feature_sigma_multiplier:\n";
    for (const auto& [id, m] : c.noise.feature_sigma_multiplier) os << "    " << id << ": " << format_double(m) << "\n";
  }
  os << "digitization:\n";
  os << "  points_per_groove: " << c.digitization.points_per_groove << "\n";
  os << "  touches_per_landmark: " << c.digitization.touches_per_landmark << "\n";
  os << "workspaces:\n";
  for (const auto& w : c.workspaces) {
    os << "  - name: " << w.name << "\n";
    os << "    center: " << format_double(w.center.x()) << ' ' << format_double(w.center.y()) << ' '
       << format_double(w.center.z()) << " mm\n";
    os << "    diameter: " << format_double(w.diameter) << " mm\n";
    os << "    orientation_range: " << format_double(w.orientation_range) << " deg\n";
    os << "    poses: " << w.n_poses << "\n";
  }
  os << "trials:\n  gbec: " << c.gbec_trials << "\n  axxb: " << c.axxb_trials << "\n";
  os << "axxb_pairing: " << to_string(c.pairing) << "\n";
  if (c.offset_compliance > 0.0) os << "robot_offset:\n  compliance: " << format_double(c.offset_compliance) << "\n";
  os << "alignments: " << c.alignments << "\n";
  if (!c.output_dir.empty()) os << "output: " << c.output_dir.string() << "\n";
  os << "export_digitizations: " << (c.export_digitizations ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace gbec
