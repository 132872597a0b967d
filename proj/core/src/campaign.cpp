#include "gbec/campaign.hpp"

#include "gbec/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace gbec {
namespace {

constexpr std::uint64_t kAlignmentStream = 0x616c69676e6d6e74ULL;

struct TrialJob {
  Method method;
  std::size_t workspace;
  std::size_t local_index;
  std::size_t global_index;
  std::size_t gbec_ordinal;  // position among GBEC trials, for alignment selection
};

TrialReport run_job(const ExperimentConfig& cfg, const TrialJob& job) {
  NoiseSpec noise = cfg.noise;
  noise.seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(job.method) + 1,
                        job.workspace, job.local_index);
  const WorkspaceSpec ws = effective_workspace(cfg, job.workspace);

  TrialReport report;
  if (job.method == Method::kGbec) {
    DigitizationSet dig = simulate_digitization(cfg.scene, noise, cfg.digitization);
    report.trial = run_gbec(cfg.scene.attachment, dig);
    if (cfg.scene.attachment.kind == AttachmentKind::kGrooves) {
      report.regression = line_regression_errors(dig, report.trial.line_fits);
      report.fle = fle_report(report.trial, cfg.scene.attachment, dig);
      for (const auto& f : fle_report(cfg.scene.true_handeye, cfg.scene.attachment, dig).features) {
        report.fle_truth.push_back({f.id, f.mean_pre, f.mean_post, f.reduction_percent});
      }
    }
    if (job.gbec_ordinal < cfg.alignments) {
      const RigidTransform target =
          random_target_pose(mix_seed(cfg.master_seed, kAlignmentStream, job.gbec_ordinal));
      report.alignment = alignment_error(report.trial.result, cfg.scene.true_handeye, target);
    }
    if (cfg.export_digitizations) report.digitization = std::move(dig);
  } else {
    const auto poses = simulate_pose_stream(cfg.scene, ws, noise);
    report.trial = solve_axxb(build_motion_pairs(poses, cfg.pairing));
  }
  report.trial.metadata = {cfg.campaign, job.global_index, ws.name, noise.seed};
  return report;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.campaign.empty()) throw Error(ErrorCode::kConfigInvalid, "campaign name is empty");
  if (config.workspaces.empty()) throw Error(ErrorCode::kConfigInvalid, "at least one workspace is required");
  if (config.gbec_trials + config.axxb_trials == 0) {
    throw Error(ErrorCode::kConfigInvalid, "at least one trial count must be >= 1");
  }
  std::set<std::string> names;
  for (const auto& ws : config.workspaces) {
    validate(ws);
    if (!names.insert(ws.name).second) {
      throw Error(ErrorCode::kConfigInvalid, "duplicate workspace name '" + ws.name + "'");
    }
  }
  validate(config.noise);
  validate(config.scene.attachment);
  if (!(config.offset_compliance >= 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "offset compliance must be >= 0");
  }
  if (config.alignments > config.gbec_trials * config.workspaces.size()) {
    throw Error(ErrorCode::kConfigInvalid, "more alignments requested than GBEC trials");
  }
  const auto ids = config.scene.attachment.feature_ids();
  for (const auto& [id, m] : config.noise.feature_sigma_multiplier) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw Error(ErrorCode::kConfigInvalid, "sigma multiplier names unknown feature '" + id + "'");
    }
  }
  if (config.scene.attachment.kind == AttachmentKind::kGrooves &&
      config.digitization.points_per_groove < 2) {
    throw Error(ErrorCode::kConfigInvalid, "points_per_groove must be >= 2");
  }
  if (config.scene.attachment.kind == AttachmentKind::kPoints &&
      config.digitization.touches_per_landmark < 1) {
    throw Error(ErrorCode::kConfigInvalid, "touches_per_landmark must be >= 1");
  }
}

WorkspaceSpec effective_workspace(const ExperimentConfig& config, std::size_t index) {
  WorkspaceSpec ws = config.workspaces.at(index);
  if (config.offset_compliance > 0.0) {
    ws.robot_offset = RigidTransform::from_translation(config.offset_compliance * ws.center);
  }
  return ws;
}

RigidTransform random_target_pose(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Vector3 rotvec(30.0 * unit(rng), 30.0 * unit(rng), 30.0 * unit(rng));
  const Vector3 t(400.0 + 100.0 * unit(rng), 100.0 * unit(rng), 300.0 + 100.0 * unit(rng));
  return RigidTransform::from_rotation_vector_deg(rotvec, t);
}

CampaignSummary summarize(const std::vector<TrialReport>& trials, const OutlierPolicy& policy) {
  CampaignSummary s;
  std::map<Method, std::vector<CalibrationTrial>> by_method;
  std::map<Method, std::vector<WorkspaceGroup>> groups;
  std::vector<AlignmentError> alignments;
  std::vector<double> regression_means;
  std::vector<std::string> fle_order;
  std::map<std::string, std::vector<const FeatureFle*>> fle_rows;

  for (const auto& r : trials) {
    const Method m = r.trial.method;
    by_method[m].push_back(r.trial);
    ++s.trial_counts[m];
    auto& g = groups[m];
    auto it = std::find_if(g.begin(), g.end(), [&](const WorkspaceGroup& wg) {
      return wg.workspace == r.trial.metadata.workspace;
    });
    if (it == g.end()) {
      g.push_back({r.trial.metadata.workspace, {}});
      it = std::prev(g.end());
    }
    it->transforms.push_back(r.trial.result);
    if (r.alignment) alignments.push_back(*r.alignment);
    if (r.regression) regression_means.push_back(r.regression->trial_mean);
    if (r.fle) {
      for (const auto& f : r.fle->features) {
        if (!fle_rows.count(f.id)) fle_order.push_back(f.id);
        fle_rows[f.id].push_back(&f);
      }
    }
  }

  if (by_method.count(Method::kGbec)) s.residuals = landmark_residuals(by_method[Method::kGbec]);
  for (const auto& id : fle_order) {
    FleSummaryRow row;
    row.id = id;
    std::vector<double> pre, post;
    for (const auto* f : fle_rows[id]) {
      pre.push_back(f->mean_pre);
      post.push_back(f->mean_post);
      if (f->mean_post < f->mean_pre) ++row.trials_reduced;
    }
    row.trials = pre.size();
    row.mean_pre = sample_stats(pre).mean;
    row.mean_post = sample_stats(post).mean;
    row.reduction_percent =
        row.mean_pre > kFleResolution ? 100.0 * (row.mean_pre - row.mean_post) / row.mean_pre : 0.0;
    row.sign_test_p = sign_test_p_value(row.trials_reduced, row.trials);
    s.fle.push_back(row);
  }
  for (const auto& [m, ts] : by_method) {
    if (ts.size() >= 2 + policy.drop_most_deviant) s.repeatability[m] = repeatability(ts, policy);
  }
  for (const auto& [m, g] : groups) {
    if (g.size() >= 2) s.workspaces[m] = workspace_summary(g);
  }
  if (!alignments.empty()) s.alignment = alignment_table(alignments);
  if (!regression_means.empty()) s.line_regression = sample_stats(regression_means);
  return s;
}

CampaignReport run_experiment_campaign(const ExperimentConfig& config) {
  validate(config);
  std::vector<TrialJob> jobs;
  std::size_t gbec_ordinal = 0;
  for (std::size_t w = 0; w < config.workspaces.size(); ++w) {
    for (std::size_t i = 0; i < config.gbec_trials; ++i) {
      jobs.push_back({Method::kGbec, w, i, jobs.size(), gbec_ordinal++});
    }
  }
  for (std::size_t w = 0; w < config.workspaces.size(); ++w) {
    for (std::size_t i = 0; i < config.axxb_trials; ++i) {
      jobs.push_back({Method::kAxxb, w, i, jobs.size(), 0});
    }
  }

  std::vector<std::optional<TrialReport>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        results[k] = run_job(config, jobs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::size_t n_threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  n_threads = std::clamp<std::size_t>(n_threads, 1, std::max<std::size_t>(jobs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(k) + " (" + std::string(to_string(jobs[k].method)) +
                                ", workspace '" + config.workspaces[jobs[k].workspace].name + "'): " + e.message());
    }
  }

  CampaignReport report;
  report.campaign = config.campaign;
  report.master_seed = config.master_seed;
  report.attachment = config.scene.attachment.name;
  report.truth = config.scene.true_handeye;
  report.trials.reserve(jobs.size());
  for (auto& r : results) report.trials.push_back(std::move(*r));
  report.summary = summarize(report.trials);
  return report;
}

}  // namespace gbec
