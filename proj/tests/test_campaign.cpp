#include "gbec/config.hpp"
#include "gbec/error.hpp"
#include "gbec/io.hpp"
#include "gbec/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace gbec {
namespace {

std::string archive_text(const CampaignReport& r) {
  std::ostringstream os;
  io::write_archive(os, r);
  return os.str();
}

std::size_t count(const CampaignReport& r, Method m) {
  std::size_t n = 0;
  for (const auto& t : r.trials) n += t.trial.method == m;
  return n;
}

TEST(Campaign, BundledTrialCounts) {
  ExperimentConfig tms = load_experiment_config(GBEC_DATA_DIR "/tms57.config");
  const CampaignReport a = run_experiment_campaign(tms);
  EXPECT_EQ(count(a, Method::kGbec), 57u);
  EXPECT_EQ(count(a, Method::kAxxb), 39u);
  EXPECT_EQ(a.summary.trial_counts.at(Method::kGbec), 57u);
  ASSERT_TRUE(a.summary.alignment.has_value());
  EXPECT_EQ(a.summary.alignment->n, 12u);
  EXPECT_EQ(a.summary.fle.size(), 8u);

  const CampaignReport b = run_experiment_campaign(load_experiment_config(GBEC_DATA_DIR "/femoroplasty39.config"));
  EXPECT_EQ(count(b, Method::kGbec), 39u);
  EXPECT_EQ(count(b, Method::kAxxb), 39u);
  EXPECT_TRUE(b.summary.fle.empty());
}

TEST(Campaign, TrialsCarryMetadata) {
  ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/workspaces3.config");
  c.gbec_trials = 2;
  c.axxb_trials = 2;
  c.alignments = 0;
  const CampaignReport r = run_experiment_campaign(c);
  ASSERT_EQ(r.trials.size(), 12u);
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const auto& m = r.trials[i].trial.metadata;
    EXPECT_EQ(m.campaign, "workspaces3");
    EXPECT_EQ(m.trial_index, i);
    EXPECT_FALSE(m.workspace.empty());
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(r.trials[j].trial.metadata.seed, m.seed);
  }
}

TEST(Campaign, SameSeedIsByteIdentical) {
  ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/workspaces3.config");
  c.threads = 1;
  const CampaignReport a = run_experiment_campaign(c);
  c.threads = 4;
  const CampaignReport b = run_experiment_campaign(c);
  EXPECT_EQ(archive_text(a), archive_text(b));
  EXPECT_EQ(campaign_report_json(a), campaign_report_json(b));
  EXPECT_EQ(campaign_report_text(a), campaign_report_text(b));
  c.master_seed += 1;
  EXPECT_NE(archive_text(run_experiment_campaign(c)), archive_text(a));
}

TEST(Campaign, NoiselessCampaignRecoversTruth) {
  ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/tms57.config");
  c.noise = NoiseSpec::noiseless();
  c.gbec_trials = 3;
  c.axxb_trials = 3;
  c.alignments = 2;
  const CampaignReport r = run_experiment_campaign(c);
  for (const auto& t : r.trials) {
    EXPECT_LT((t.trial.result.translation() - r.truth.translation()).norm(), 1e-9);
    EXPECT_LT(rotation_angle_between(t.trial.result, r.truth), 1e-9);
  }
  ASSERT_TRUE(r.summary.residuals.has_value());
  EXPECT_LT(r.summary.residuals->overall.mean, 1e-9);
  for (double v : r.summary.alignment->mean) EXPECT_LT(v, 1e-9);
}

TEST(Campaign, InvalidConfigsAreRejected) {
  ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/tms57.config");
  ExperimentConfig bad = c;
  bad.alignments = 100;
  EXPECT_THROW(run_experiment_campaign(bad), Error);
  bad = c;
  bad.workspaces.push_back(bad.workspaces[0]);
  EXPECT_THROW(run_experiment_campaign(bad), Error);
  bad = c;
  bad.noise.feature_sigma_multiplier["l1"] = 2.0;
  EXPECT_THROW(run_experiment_campaign(bad), Error);
}

TEST(Campaign, TrialFailureNamesTheTrial) {
  // Orientation changes far below the motion threshold leave AX=XB unsolvable.
  ExperimentConfig c = load_experiment_config(GBEC_DATA_DIR "/tms57.config");
  c.noise = NoiseSpec::noiseless();
  c.workspaces[0].orientation_range = 1e-8;
  c.gbec_trials = 2;
  c.axxb_trials = 2;
  c.alignments = 0;
  try {
    run_experiment_campaign(c);
    FAIL() << "motionless pose stream calibrated";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientMotion) << e.what();
    EXPECT_NE(std::string(e.what()).find("trial 2 (axxb, workspace 'ws1')"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace gbec
