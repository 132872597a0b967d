#pragma once

#include "gbec/metrics.hpp"
#include "gbec/pipelines.hpp"
#include "gbec/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gbec {

struct ExperimentConfig {
  std::string campaign = "campaign";
  std::uint64_t master_seed = 1;
  std::string attachment_ref;  // where the attachment came from (file or builtin name)
  SceneTruth scene;
  NoiseSpec noise;  // its seed is ignored; trial seeds derive from master_seed
  DigitizationOptions digitization;
  std::vector<WorkspaceSpec> workspaces;
  std::size_t gbec_trials = 0;  // per workspace
  std::size_t axxb_trials = 0;  // per workspace
  Pairing pairing = Pairing::kConsecutive;
  // Robot offset mode: each workspace gets a reported-pose offset of
  // offset_compliance * (workspace center) mm. 0 disables the mode.
  double offset_compliance = 0.0;
  std::size_t alignments = 0;  // simulated tool alignments on the first GBEC trials
  std::filesystem::path output_dir;
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool export_digitizations = false;
};

// Throws ConfigInvalid with a readable message.
void validate(const ExperimentConfig& config);

// Workspace as simulated, with the offset mode applied.
WorkspaceSpec effective_workspace(const ExperimentConfig& config, std::size_t index);

struct GrooveFleSummary {
  std::string id;
  double mean_pre = 0.0;
  double mean_post = 0.0;
  double reduction_percent = 0.0;
};

struct TrialReport {
  CalibrationTrial trial;
  std::optional<LineRegressionReport> regression;  // GBEC on grooves
  std::optional<FleReport> fle;                    // against the trial's own calibration
  std::vector<GrooveFleSummary> fle_truth;         // against the scene truth
  std::optional<AlignmentError> alignment;
  std::optional<DigitizationSet> digitization;     // only when exported
};

struct FleSummaryRow {
  std::string id;
  double mean_pre = 0.0;
  double mean_post = 0.0;
  double reduction_percent = 0.0;
  std::size_t trials_reduced = 0;  // trials with mean_post < mean_pre
  std::size_t trials = 0;
  double sign_test_p = 1.0;
};

struct CampaignSummary {
  std::map<Method, std::size_t> trial_counts;
  std::optional<ResidualReport> residuals;
  std::vector<FleSummaryRow> fle;
  std::map<Method, RepeatabilityReport> repeatability;
  std::map<Method, WorkspaceReport> workspaces;
  std::optional<AlignmentTable> alignment;
  std::optional<SampleStats> line_regression;  // over trial means
};

// Every statistic is recomputed from the raw trial records.
CampaignSummary summarize(const std::vector<TrialReport>& trials,
                          const OutlierPolicy& policy = {});

struct CampaignReport {
  std::string campaign;
  std::uint64_t master_seed = 0;
  std::string attachment;
  RigidTransform truth;
  std::vector<TrialReport> trials;
  CampaignSummary summary;
};

// Runs every trial with derived seeds (possibly in parallel) and aggregates.
// Deterministic given the config.
CampaignReport run_experiment_campaign(const ExperimentConfig& config);

// Random tool target pose for alignment trials.
RigidTransform random_target_pose(std::uint64_t seed);

}  // namespace gbec
