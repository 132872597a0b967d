#include "gbec/error.hpp"
#include "gbec/metrics.hpp"
#include "gbec/simulator.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gbec {
namespace {

// Two-pass mean and (n - 1) standard deviation, written independently of
// sample_stats.
std::pair<double, double> oracle_stats(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  const long double m = s / v.size();
  long double q = 0;
  for (double x : v) q += (x - m) * (x - m);
  return {static_cast<double>(m), v.size() > 1 ? std::sqrt(static_cast<double>(q / (v.size() - 1))) : 0.0};
}

TEST(SampleStats, MatchesOracle) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(3.0, 2.0);
  std::vector<double> v(137);
  for (auto& x : v) x = g(rng);
  const auto [m, s] = oracle_stats(v);
  const SampleStats st = sample_stats(v);
  EXPECT_EQ(st.n, 137u);
  EXPECT_NEAR(st.mean, m, 1e-12);
  EXPECT_NEAR(st.std, s, 1e-12);
  EXPECT_EQ(sample_stats({5.0}).std, 0.0);
}

struct NoisyTrial {
  SceneTruth scene;
  DigitizationSet dig;
  CalibrationTrial trial;
};

NoisyTrial make_trial(std::uint64_t seed, const NoiseSpec& base = NoiseSpec{}) {
  NoisyTrial t{default_scene(default_tms_holder()), {}, {}};
  NoiseSpec n = base;
  n.seed = seed;
  t.dig = simulate_digitization(t.scene, n);
  t.trial = run_gbec(t.scene.attachment, t.dig);
  return t;
}

TEST(LineRegression, CollinearCloudGivesZero) {
  const NoisyTrial t = make_trial(1, NoiseSpec::noiseless());
  const LineRegressionReport r = line_regression_errors(t.dig, t.trial.line_fits);
  EXPECT_EQ(r.grooves.size(), 8u);
  for (const auto& g : r.grooves) EXPECT_LT(g.stats.mean, 1e-9);
  EXPECT_LT(r.trial_mean, 1e-9);
}

TEST(LineRegression, MatchesDirectRecomputation) {
  const NoisyTrial t = make_trial(2);
  const LineRegressionReport r = line_regression_errors(t.dig, t.trial.line_fits);
  double sum_of_means = 0.0;
  for (std::size_t k = 0; k < r.grooves.size(); ++k) {
    const auto& fit = t.trial.line_fits[k];
    const Vector3 d = fit.fit.line.direction();
    std::vector<double> dist;
    for (const auto& p : t.dig.features[k].cloud.points) {
      const Vector3 v = p - fit.fit.line.anchor();
      dist.push_back(v.cross(d).norm());
    }
    const auto [m, s] = oracle_stats(dist);
    EXPECT_NEAR(r.grooves[k].stats.mean, m, 1e-12);
    EXPECT_NEAR(r.grooves[k].stats.std, s, 1e-12);
    sum_of_means += m;
  }
  EXPECT_NEAR(r.trial_mean, sum_of_means / 8.0, 1e-12);
}

TEST(LineRegression, TypicalNoiseGivesFractionOfMillimeter) {
  double acc = 0.0;
  for (int k = 0; k < 20; ++k) {
    const NoisyTrial t = make_trial(100 + k);
    acc += line_regression_errors(t.dig, t.trial.line_fits).trial_mean;
  }
  acc /= 20.0;
  EXPECT_GT(acc, 0.1);
  EXPECT_LT(acc, 0.5);
}

TEST(FleReport, NoiselessIsZero) {
  const NoisyTrial t = make_trial(3, NoiseSpec::noiseless());
  for (const auto& f : fle_report(t.trial, t.scene.attachment, t.dig).features) {
    EXPECT_LT(f.mean_pre, 1e-9);
    EXPECT_LT(f.mean_post, 1e-9);
    EXPECT_EQ(f.reduction_percent, 0.0);
  }
}

TEST(FleReport, DefinitionsMatchOracle) {
  const NoisyTrial t = make_trial(4);
  const FleReport r = fle_report(t.trial, t.scene.attachment, t.dig);
  ASSERT_EQ(r.features.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    const auto& f = r.features[k];
    const Line3 gt = transform_line(invert(t.trial.result), t.scene.attachment.grooves().grooves[k].line);
    const Line3& fitted = t.trial.line_fits[k].fit.line;
    std::vector<double> pre, post;
    for (const auto& p : t.dig.features[k].cloud.points) {
      pre.push_back(gt.distance_to(p));
      const Point3 q = fitted.at(fitted.parameter_of(p));
      post.push_back(gt.distance_to(q));
    }
    const double mp = oracle_stats(pre).first, mq = oracle_stats(post).first;
    EXPECT_NEAR(f.mean_pre, mp, 1e-9);
    EXPECT_NEAR(f.mean_post, mq, 1e-9);
    EXPECT_NEAR(f.reduction_percent, 100.0 * (mp - mq) / mp, 1e-7);
  }
}

TEST(FleReport, PointModelsNeedGrooves) {
  const SceneTruth scene = default_scene(default_rdid());
  const DigitizationSet dig = simulate_digitization(scene, NoiseSpec{});
  const CalibrationTrial trial = run_gbec(scene.attachment, dig);
  try {
    fle_report(trial, scene.attachment, dig);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGroovesRequired);
  }
}

TEST(FleReport, PostBelowPreInExpectation) {
  std::vector<std::size_t> reduced(8, 0);
  std::vector<double> pre(8, 0.0), post(8, 0.0);
  const int trials = 100;
  for (int k = 0; k < trials; ++k) {
    const NoisyTrial t = make_trial(200 + k);
    const FleReport r = fle_report(t.trial, t.scene.attachment, t.dig);
    for (std::size_t g = 0; g < 8; ++g) {
      if (r.features[g].mean_post < r.features[g].mean_pre) ++reduced[g];
      pre[g] += r.features[g].mean_pre;
      post[g] += r.features[g].mean_post;
    }
  }
  for (std::size_t g = 0; g < 8; ++g) {
    EXPECT_LT(post[g], pre[g]);
    EXPECT_LT(sign_test_p_value(reduced[g], trials), 0.01);
  }
}

TEST(LandmarkResiduals, NoiselessIsExactlyZero) {
  const NoisyTrial t = make_trial(5, NoiseSpec::noiseless());
  const ResidualReport r = landmark_residuals(t.trial);
  EXPECT_LT(r.overall.mean, 1e-9);
  for (const auto& f : r.features) EXPECT_LT(f.per_feature.mean, 1e-9);
}

TEST(LandmarkResiduals, PerFeatureMeanOverSampledPoints) {
  std::vector<CalibrationTrial> trials;
  for (int k = 0; k < 5; ++k) trials.push_back(make_trial(300 + k).trial);
  const ResidualReport r = landmark_residuals(trials);
  ASSERT_EQ(r.features.size(), 8u);
  std::vector<double> all;
  for (std::size_t f = 0; f < 8; ++f) {
    std::vector<double> means;
    for (const auto& t : trials) {
      const auto& res = t.feature_residuals[f].residuals;
      ASSERT_EQ(res.size(), 10u);
      means.push_back(std::accumulate(res.begin(), res.end(), 0.0) / 10.0);
      all.push_back(means.back());
    }
    const auto [m, s] = oracle_stats(means);
    EXPECT_NEAR(r.features[f].per_feature.mean, m, 1e-12);
    EXPECT_NEAR(r.features[f].per_feature.std, s, 1e-12);
  }
  const auto [m, s] = oracle_stats(all);
  EXPECT_NEAR(r.overall.mean, m, 1e-12);
  EXPECT_NEAR(r.overall.std, s, 1e-12);
  EXPECT_EQ(r.overall.n, 40u);
}

TEST(Repeatability, IdenticalTrialsHaveZeroStd) {
  const RigidTransform t = RigidTransform::from_rotation_vector_deg(Vector3(5, 6, 7), Vector3(1, 2, 3));
  const RepeatabilityReport r = repeatability(std::vector<RigidTransform>(10, t));
  EXPECT_LT(r.translation_std.norm(), 1e-12);
  EXPECT_LT(r.rotation_std.norm(), 1e-9);
  EXPECT_EQ(r.n_trials, 10u);
}

TEST(Repeatability, RecoversInjectedScatter) {
  std::mt19937_64 rng(6);
  const Vector3 sigma_t(0.4, 0.65, 0.3);
  const Vector3 sigma_r(0.2, 0.1, 0.3);
  const RigidTransform base = RigidTransform::from_rotation_vector_deg(Vector3(20, -10, 40), Vector3(38, -52, 86));
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<RigidTransform> ts;
  for (int k = 0; k < 300; ++k) {
    const Vector3 dt(sigma_t.x() * g(rng), sigma_t.y() * g(rng), sigma_t.z() * g(rng));
    const Vector3 dr(sigma_r.x() * g(rng), sigma_r.y() * g(rng), sigma_r.z() * g(rng));
    ts.emplace_back(RigidTransform::from_rotation_vector_deg(dr).rotation() * base.rotation(),
                    base.translation() + dt);
  }
  const RepeatabilityReport r = repeatability(ts);
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(r.translation_std[a], sigma_t[a], 0.15 * sigma_t[a]);
    EXPECT_NEAR(r.rotation_std[a], sigma_r[a], 0.15 * sigma_r[a]);
  }
}

TEST(Repeatability, InvariantToTrialOrder) {
  std::mt19937_64 rng(7);
  std::vector<RigidTransform> ts;
  for (int k = 0; k < 30; ++k) ts.push_back(test::random_transform(rng, 2.0));
  const RepeatabilityReport a = repeatability(ts);
  std::shuffle(ts.begin(), ts.end(), rng);
  const RepeatabilityReport b = repeatability(ts);
  EXPECT_LT((a.translation_std - b.translation_std).norm(), 1e-12);
  EXPECT_LT((a.rotation_std - b.rotation_std).norm(), 1e-9);
}

TEST(Repeatability, DropsMostDeviantTrials) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<RigidTransform> ts;
  for (int k = 0; k < 20; ++k) ts.push_back(RigidTransform::from_translation(Vector3(g(rng), g(rng), g(rng))));
  ts.push_back(RigidTransform::from_translation(Vector3(50, 0, 0)));
  ts.push_back(RigidTransform::from_translation(Vector3(0, -40, 0)));
  const RepeatabilityReport all = repeatability(ts);
  const RepeatabilityReport trimmed = repeatability(ts, OutlierPolicy{2});
  EXPECT_EQ(trimmed.outliers_removed, 2u);
  EXPECT_EQ(trimmed.n_trials, 20u);
  EXPECT_GT(all.translation_std.x(), 5.0);
  EXPECT_LT(trimmed.translation_std.maxCoeff(), 0.2);
}

TEST(WorkspaceSummary, IdenticalTrialsGiveZeroRanges) {
  const RigidTransform t = RigidTransform::from_translation(Vector3(1, 2, 3));
  const WorkspaceReport r = workspace_summary({{"a", {t, t, t}}, {"b", {t, t}}});
  EXPECT_EQ(r.combined_translation_range, Vector3::Zero());
  for (const auto& c : r.clusters) EXPECT_EQ(c.translation_range, Vector3::Zero());
  EXPECT_EQ(r.min_centroid_separation, 0.0);
}

TEST(WorkspaceSummary, RangesMatchOracle) {
  std::mt19937_64 rng(9);
  std::vector<WorkspaceGroup> groups;
  for (int w = 0; w < 3; ++w) {
    WorkspaceGroup g{"ws" + std::to_string(w + 1), {}};
    for (int k = 0; k < 8; ++k) g.transforms.push_back(test::random_transform(rng, 5.0));
    groups.push_back(g);
  }
  const WorkspaceReport r = workspace_summary(groups);
  Vector3 lo = Vector3::Constant(1e300), hi = -lo;
  for (std::size_t w = 0; w < groups.size(); ++w) {
    Vector3 clo = Vector3::Constant(1e300), chi = -clo;
    for (const auto& t : groups[w].transforms) {
      clo = clo.cwiseMin(t.translation());
      chi = chi.cwiseMax(t.translation());
    }
    EXPECT_LT((r.clusters[w].translation_range - (chi - clo)).norm(), 1e-12);
    EXPECT_EQ(r.clusters[w].vectors.size(), 8u);
    lo = lo.cwiseMin(clo);
    hi = hi.cwiseMax(chi);
  }
  EXPECT_LT((r.combined_translation_range - (hi - lo)).norm(), 1e-12);
}

TEST(WorkspaceSummary, NeedsTwoWorkspaces) {
  EXPECT_THROW(workspace_summary({{"a", {RigidTransform{}, RigidTransform{}}}}), Error);
}

TEST(Vector6, TranslationThenRotationVector) {
  const RigidTransform t = RigidTransform::from_rotation_vector_deg(Vector3(0, 0, 30), Vector3(1, 2, 3));
  const Vector6 v = to_vector6(t);
  EXPECT_NEAR((v.head<3>() - Vector3(1, 2, 3)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((v.tail<3>() - Vector3(0, 0, 30)).norm(), 0.0, 1e-10);
}

TEST(AlignmentTable, ZeroErrors) {
  const AlignmentTable t = alignment_table(std::vector<AlignmentError>(4));
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(t.mean[i], 0.0);
    EXPECT_EQ(t.std[i], 0.0);
  }
  EXPECT_EQ(t.n, 4u);
}

TEST(AlignmentTable, MatchesOracleOnAbsoluteValues) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<AlignmentError> errs(12);
  for (auto& e : errs) {
    e.translation_mm = Vector3(g(rng), g(rng), g(rng));
    e.rotation_deg = Vector3(g(rng), g(rng), g(rng));
  }
  const AlignmentTable t = alignment_table(errs);
  for (int i = 0; i < 6; ++i) {
    std::vector<double> col;
    for (const auto& e : errs) col.push_back(std::abs(e.components()[i]));
    const auto [m, s] = oracle_stats(col);
    EXPECT_NEAR(t.mean[i], m, 1e-12);
    EXPECT_NEAR(t.std[i], s, 1e-12);
  }
}

TEST(SignTest, MatchesDirectBinomialSum) {
  EXPECT_NEAR(sign_test_p_value(10, 10), std::pow(0.5, 10), 1e-15);
  EXPECT_NEAR(sign_test_p_value(0, 10), 1.0, 1e-12);
  // P(X >= 15), X ~ Bin(20, 1/2), by explicit summation of binomial terms.
  double p = 0.0;
  for (int k = 15; k <= 20; ++k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (20 - i) / (i + 1);
    p += c * std::pow(0.5, 20);
  }
  EXPECT_NEAR(sign_test_p_value(15, 20), p, 1e-12);
}

TEST(Spearman, MonotoneAndTies) {
  EXPECT_NEAR(spearman_rho({1, 2, 3, 4}, {10, 20, 25, 100}), 1.0, 1e-12);
  EXPECT_NEAR(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-12);
  // Ranks (1, 2.5, 2.5, 4) vs (1, 2, 3, 4): Pearson on ranks.
  const double rho = spearman_rho({1, 2, 2, 3}, {1, 2, 3, 4});
  EXPECT_NEAR(rho, 0.9486832980505138, 1e-12);
}

}  // namespace
}  // namespace gbec
