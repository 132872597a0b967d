#include "gbec/simulator.hpp"

#include "gbec/error.hpp"
#include "gbec/registration.hpp"

#include <cmath>

namespace gbec {
namespace {

constexpr std::uint64_t kDigitizationStream = 0x6469676974697a65ULL;
constexpr std::uint64_t kPoseStream = 0x706f736573747265ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vector3 gaussian3(std::mt19937_64& rng, double sigma) {
  if (sigma == 0.0) return Vector3::Zero();
  std::normal_distribution<double> n(0.0, sigma);
  const double x = n(rng);
  const double y = n(rng);
  const double z = n(rng);
  return {x, y, z};
}

RigidTransform small_motion(std::mt19937_64& rng, double trans_sigma, double rot_sigma_deg) {
  const Vector3 t = gaussian3(rng, trans_sigma);
  const Vector3 w = gaussian3(rng, rot_sigma_deg);
  return RigidTransform::from_rotation_vector_deg(w, t);
}

}  // namespace

NoiseSpec NoiseSpec::noiseless(std::uint64_t seed) {
  NoiseSpec n;
  n.tracker_sigma = 0.0;
  n.tracker_rotation_sigma = 0.0;
  n.stroke_sigma = 0.0;
  n.robot_translation_sigma = 0.0;
  n.robot_rotation_sigma = 0.0;
  n.seed = seed;
  return n;
}

double NoiseSpec::multiplier_for(const std::string& feature_id) const {
  const auto it = feature_sigma_multiplier.find(feature_id);
  return it == feature_sigma_multiplier.end() ? 1.0 : it->second;
}

void validate(const NoiseSpec& noise) {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kConfigInvalid, std::string(name) + " must be a finite value >= 0");
    }
  };
  check(noise.tracker_sigma, "tracker_sigma");
  check(noise.tracker_rotation_sigma, "tracker_rotation_sigma");
  check(noise.stroke_sigma, "stroke_sigma");
  check(noise.jitter_fraction, "jitter_fraction");
  check(noise.robot_translation_sigma, "robot_translation_sigma");
  check(noise.robot_rotation_sigma, "robot_rotation_sigma");
  if (noise.jitter_fraction >= 0.5) {
    throw Error(ErrorCode::kConfigInvalid, "jitter_fraction must be below 0.5");
  }
  for (const auto& [id, m] : noise.feature_sigma_multiplier) {
    check(m, ("feature_sigma_multiplier." + id).c_str());
  }
}

void validate(const WorkspaceSpec& ws) {
  if (!(ws.diameter > 0.0)) throw Error(ErrorCode::kConfigInvalid, "workspace diameter must be > 0");
  if (ws.n_poses < 3) throw Error(ErrorCode::kConfigInvalid, "workspace n_poses must be >= 3");
  if (!(ws.orientation_range > 0.0) || ws.orientation_range >= 90.0) {
    throw Error(ErrorCode::kConfigInvalid, "orientation_range must be in (0, 90) deg");
  }
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

Matrix3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double w = n(rng);
  const double x = n(rng);
  const double y = n(rng);
  const double z = n(rng);
  Eigen::Quaterniond q(w, x, y, z);
  q.normalize();
  return q.toRotationMatrix();
}

SceneTruth default_scene(AttachmentSpec attachment) {
  SceneTruth scene;
  scene.true_handeye = RigidTransform::from_rotation_vector_deg(Vector3(12.0, -20.0, 35.0),
                                                                Vector3(38.0, -52.0, 86.0));
  scene.camera_to_base = RigidTransform::from_rotation_vector_deg(Vector3(0.0, 90.0, 15.0),
                                                                  Vector3(-200.0, 150.0, 1800.0));
  scene.attachment = std::move(attachment);
  return scene;
}

DigitizationSet simulate_digitization(const SceneTruth& scene, const NoiseSpec& noise,
                                      const DigitizationOptions& options) {
  validate(noise);
  std::mt19937_64 rng(mix_seed(noise.seed, kDigitizationStream));
  const RigidTransform eff_to_marker = invert(scene.true_handeye);

  DigitizationSet dig;
  dig.attachment = scene.attachment.name;
  dig.points_per_groove = options.points_per_groove;

  if (scene.attachment.kind == AttachmentKind::kGrooves) {
    if (options.points_per_groove < 2) {
      throw Error(ErrorCode::kConfigInvalid, "points_per_groove must be >= 2");
    }
    const std::size_t n = options.points_per_groove;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (const auto& g : scene.attachment.grooves().grooves) {
      const double mult = noise.multiplier_for(g.id);
      std::normal_distribution<double> stroke(0.0, 1.0);
      const double t0 = g.t_min + (noise.stroke_sigma > 0.0 ? noise.stroke_sigma * stroke(rng) : 0.0);
      const double t1 = g.t_max + (noise.stroke_sigma > 0.0 ? noise.stroke_sigma * stroke(rng) : 0.0);
      const double spacing = (t1 - t0) / static_cast<double>(n - 1);
      DigitizedFeature f{g.id, {{}, std::string(kMarkerFrame)}};
      f.cloud.points.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        double t = (i + 1 == n) ? t1 : t0 + spacing * static_cast<double>(i);
        if (i != 0 && i + 1 != n) t += noise.jitter_fraction * spacing * unit(rng);
        const Point3 p_eff = g.line.at(t);
        f.cloud.points.push_back(eff_to_marker(p_eff) + gaussian3(rng, noise.tracker_sigma * mult));
      }
      dig.features.push_back(std::move(f));
    }
  } else {
    if (options.touches_per_landmark < 1) {
      throw Error(ErrorCode::kConfigInvalid, "touches_per_landmark must be >= 1");
    }
    for (const auto& lm : scene.attachment.points().landmarks) {
      const double mult = noise.multiplier_for(lm.id);
      DigitizedFeature f{lm.id, {{}, std::string(kMarkerFrame)}};
      for (std::size_t k = 0; k < options.touches_per_landmark; ++k) {
        f.cloud.points.push_back(eff_to_marker(lm.position) +
                                 gaussian3(rng, noise.tracker_sigma * mult));
      }
      dig.features.push_back(std::move(f));
    }
  }
  return dig;
}

std::vector<PoseSample> simulate_pose_stream(const SceneTruth& scene, const WorkspaceSpec& ws,
                                             const NoiseSpec& noise) {
  validate(noise);
  validate(ws);
  std::mt19937_64 rng(mix_seed(noise.seed, kPoseStream));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double radius = 0.5 * ws.diameter;

  std::vector<PoseSample> out;
  out.reserve(ws.n_poses);
  for (std::size_t i = 0; i < ws.n_poses; ++i) {
    Vector3 offset;
    do {
      offset = Vector3(unit(rng), unit(rng), unit(rng));
    } while (offset.squaredNorm() > 1.0);
    const Vector3 rotvec(ws.orientation_range * unit(rng), ws.orientation_range * unit(rng),
                         ws.orientation_range * unit(rng));
    const RigidTransform true_pose =
        RigidTransform::from_rotation_vector_deg(rotvec, ws.center + radius * offset);

    const RigidTransform robot_noise =
        small_motion(rng, noise.robot_translation_sigma, noise.robot_rotation_sigma);
    const RigidTransform marker_noise =
        small_motion(rng, noise.tracker_sigma, noise.tracker_rotation_sigma);

    PoseSample s{compose(compose(true_pose, ws.robot_offset), robot_noise),
                 compose(compose(compose(scene.camera_to_base, true_pose), scene.true_handeye),
                         marker_noise)};
    out.push_back(s);
  }
  return out;
}

}  // namespace gbec
