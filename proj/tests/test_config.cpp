#include "gbec/config.hpp"
#include "gbec/error.hpp"

#include <gtest/gtest.h>

#include <string>

namespace gbec {
namespace {

const char* kMinimal = R"(campaign: demo
master_seed: 7
scene:
  attachment: builtin:tms_holder
workspaces:
  - name: ws1
    center: 450 0 350 mm
trials:
  gbec: 2
  axxb: 1
)";

std::string config_error(const std::string& text) {
  try {
    parse_experiment_config(text, GBEC_DATA_DIR);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigInvalid) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return {};
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(Config, MinimalUsesDefaults) {
  const ExperimentConfig c = parse_experiment_config(kMinimal, ".");
  EXPECT_EQ(c.campaign, "demo");
  EXPECT_EQ(c.master_seed, 7u);
  EXPECT_EQ(c.scene.attachment.name, "tms_holder");
  EXPECT_EQ(c.noise.tracker_sigma, NoiseSpec{}.tracker_sigma);
  EXPECT_EQ(c.workspaces.size(), 1u);
  EXPECT_EQ(c.workspaces[0].n_poses, 50u);
  EXPECT_EQ(c.gbec_trials, 2u);
  EXPECT_EQ(c.axxb_trials, 1u);
  EXPECT_EQ(c.pairing, Pairing::kConsecutive);
}

TEST(Config, BundledTms57) {
  const ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/tms57.config");
  EXPECT_EQ(c.gbec_trials, 57u);
  EXPECT_EQ(c.axxb_trials, 39u);
  EXPECT_EQ(c.scene.attachment.kind, AttachmentKind::kGrooves);
  EXPECT_EQ(c.noise.tracker_sigma, 0.25);
  EXPECT_EQ(c.noise.robot_translation_sigma, 2.0);
  EXPECT_EQ(c.digitization.points_per_groove, 52u);
  EXPECT_EQ(c.noise.multiplier_for("g4"), 2.0);
  EXPECT_EQ(c.alignments, 12u);
}

TEST(Config, BundledFemoroplasty) {
  const ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/femoroplasty39.config");
  EXPECT_EQ(c.gbec_trials, 39u);
  EXPECT_EQ(c.axxb_trials, 39u);
  EXPECT_EQ(c.scene.attachment.kind, AttachmentKind::kPoints);
}

TEST(Config, BundledWorkspaces) {
  const ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/workspaces3.config");
  EXPECT_EQ(c.workspaces.size(), 3u);
  EXPECT_EQ(c.gbec_trials, 8u);
  EXPECT_EQ(c.axxb_trials, 13u);
  EXPECT_GT(c.offset_compliance, 0.0);
}

TEST(Config, FormatRoundTrip) {
  for (const char* name : {"/tms57.config", "/femoroplasty39.config", "/workspaces3.config"}) {
    const ExperimentConfig a = load_experiment_config(std::string(GBEC_DATA_DIR) + name);
    const ExperimentConfig b = parse_experiment_config(format_experiment_config(a), GBEC_DATA_DIR);
    // Rotation vectors may move by an ulp, so compare fields rather than text.
    EXPECT_EQ(b.campaign, a.campaign);
    EXPECT_EQ(b.attachment_ref, a.attachment_ref);
    EXPECT_EQ(b.noise.tracker_sigma, a.noise.tracker_sigma);
    EXPECT_EQ(b.noise.stroke_sigma, a.noise.stroke_sigma);
    EXPECT_EQ(b.noise.robot_translation_sigma, a.noise.robot_translation_sigma);
    EXPECT_EQ(b.gbec_trials, a.gbec_trials);
    EXPECT_EQ(b.axxb_trials, a.axxb_trials);
    EXPECT_EQ(b.alignments, a.alignments);
    EXPECT_LT(rotation_angle_between(b.scene.camera_to_base, a.scene.camera_to_base), 1e-9);
    EXPECT_EQ(b.master_seed, a.master_seed);
    EXPECT_EQ(b.noise.feature_sigma_multiplier, a.noise.feature_sigma_multiplier);
    EXPECT_LT(rotation_angle_between(b.scene.true_handeye, a.scene.true_handeye), 1e-9);
    EXPECT_LT((b.scene.true_handeye.translation() - a.scene.true_handeye.translation()).norm(), 1e-9);
    EXPECT_EQ(b.offset_compliance, a.offset_compliance);
    ASSERT_EQ(b.workspaces.size(), a.workspaces.size());
    for (std::size_t i = 0; i < a.workspaces.size(); ++i) {
      EXPECT_EQ(b.workspaces[i].name, a.workspaces[i].name);
      EXPECT_EQ(b.workspaces[i].center, a.workspaces[i].center);
      EXPECT_EQ(b.workspaces[i].n_poses, a.workspaces[i].n_poses);
    }
  }
}

TEST(Config, UnknownKeyNamesLine) {
  const std::string msg = config_error(std::string(kMinimal) + "colour: blue\n");
  EXPECT_NE(msg.find("line 11"), std::string::npos) << msg;
  EXPECT_NE(msg.find("colour"), std::string::npos) << msg;
}

TEST(Config, WrongUnitNamesLine) {
  const std::string text = replace(kMinimal, "    center: 450 0 350 mm\n", "    center: 450 0 350 mm\n    diameter: 40 cm\n");
  const std::string msg = config_error(text);
  EXPECT_NE(msg.find("line 8"), std::string::npos) << msg;
}

TEST(Config, NegativeSigmaNamesLine) {
  const std::string text = std::string(kMinimal) + "noise:\n  tracker_sigma: -0.25 mm\n";
  const std::string msg = config_error(text);
  EXPECT_NE(msg.find("line 12"), std::string::npos) << msg;
}

TEST(Config, MissingRequiredSections) {
  config_error(replace(kMinimal, "trials:\n  gbec: 2\n  axxb: 1\n", ""));
  config_error(replace(kMinimal, "campaign: demo\n", ""));
  config_error(replace(kMinimal, "  gbec: 2\n  axxb: 1\n", "  gbec: 0\n  axxb: 0\n"));
}

TEST(Config, BadWorkspace) {
  const std::string msg = config_error(replace(kMinimal, "    center: 450 0 350 mm\n", "    center: 450 0 350 mm\n    poses: 2\n"));
  EXPECT_NE(msg.find("line 8"), std::string::npos) << msg;
}

TEST(Config, MissingAttachmentFile) {
  const std::string msg = config_error(replace(kMinimal, "builtin:tms_holder", "nowhere.yaml"));
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
}

TEST(Config, UnknownFeatureMultiplier) {
  const std::string msg = config_error(std::string(kMinimal) + "noise:\n  feature_sigma_multiplier:\n    g9: 2\n");
  EXPECT_NE(msg.find("line 13"), std::string::npos) << msg;
}

TEST(Config, MalformedYaml) {
  const std::string msg = config_error("campaign: [unterminated\n");
  EXPECT_NE(msg.find("line"), std::string::npos) << msg;
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_experiment_config("/nonexistent/gbec.config"), Error);
}

}  // namespace
}  // namespace gbec
