#include "gbec/metrics.hpp"

#include "gbec/error.hpp"
#include "gbec/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace gbec {
namespace {

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

SampleStats sample_stats(const std::vector<double>& values) {
  SampleStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  s.mean = mean_of(values);
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(s.n - 1));
  }
  return s;
}

LineRegressionReport line_regression_errors(const DigitizationSet& dig,
                                            const std::vector<FeatureFit>& fits) {
  LineRegressionReport out;
  std::vector<double> means;
  for (const auto& ff : fits) {
    const auto* f = dig.find(ff.id);
    if (f == nullptr) throw Error(ErrorCode::kMissingFeature, "no digitization for '" + ff.id + "'");
    GrooveRegression g{ff.id, {}, {}};
    g.distances.reserve(f->cloud.size());
    for (const auto& p : f->cloud.points) g.distances.push_back(ff.fit.line.distance_to(p));
    g.stats = sample_stats(g.distances);
    means.push_back(g.stats.mean);
    out.grooves.push_back(std::move(g));
  }
  out.trial_mean = mean_of(means);
  return out;
}

FleReport fle_report(const RigidTransform& calibration, const AttachmentSpec& spec,
                     const DigitizationSet& dig) {
  if (spec.kind != AttachmentKind::kGrooves) {
    throw Error(ErrorCode::kGroovesRequired, "FLE correction is defined for groove models only");
  }
  const RigidTransform eff_to_marker = invert(calibration);
  FleReport out;
  for (const auto& g : spec.grooves().grooves) {
    const auto* f = dig.find(g.id);
    if (f == nullptr) throw Error(ErrorCode::kMissingFeature, "no digitization for '" + g.id + "'");
    const Line3 truth = transform_line(eff_to_marker, g.line);
    const LineFitResult fit = fit_line(f->cloud);
    FeatureFle fe;
    fe.id = g.id;
    for (const auto& p : f->cloud.points) {
      fe.pre_correction.push_back(truth.distance_to(p));
      fe.post_correction.push_back(truth.distance_to(project_onto_line(p, fit.line)));
    }
    fe.mean_pre = mean_of(fe.pre_correction);
    fe.mean_post = mean_of(fe.post_correction);
    fe.reduction_percent = fe.mean_pre > kFleResolution ? 100.0 * (fe.mean_pre - fe.mean_post) / fe.mean_pre : 0.0;
    out.features.push_back(std::move(fe));
  }
  return out;
}

FleReport fle_report(const CalibrationTrial& trial, const AttachmentSpec& spec,
                     const DigitizationSet& dig) {
  return fle_report(trial.result, spec, dig);
}

ResidualReport landmark_residuals(const CalibrationTrial& trial) {
  return landmark_residuals(std::vector<CalibrationTrial>{trial});
}

ResidualReport landmark_residuals(const std::vector<CalibrationTrial>& trials) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_feature;
  std::vector<double> all;
  for (const auto& t : trials) {
    for (const auto& fr : t.feature_residuals) {
      if (!by_feature.count(fr.id)) order.push_back(fr.id);
      by_feature[fr.id].push_back(fr.mean);
      all.push_back(fr.mean);
    }
  }
  ResidualReport out;
  for (const auto& id : order) out.features.push_back({id, sample_stats(by_feature[id])});
  out.overall = sample_stats(all);
  return out;
}

Matrix3 mean_rotation(const std::vector<RigidTransform>& transforms) {
  Matrix3 sum = Matrix3::Zero();
  for (const auto& t : transforms) sum += t.rotation();
  return nearest_rotation(sum);
}

RepeatabilityReport repeatability(const std::vector<CalibrationTrial>& trials,
                                  const OutlierPolicy& policy) {
  std::vector<RigidTransform> ts;
  ts.reserve(trials.size());
  for (const auto& t : trials) ts.push_back(t.result);
  return repeatability(ts, policy);
}

RepeatabilityReport repeatability(const std::vector<RigidTransform>& transforms,
                                  const OutlierPolicy& policy) {
  if (transforms.size() < 2 || transforms.size() - 2 < policy.drop_most_deviant) {
    throw Error(ErrorCode::kCountMismatch, "repeatability needs at least 2 trials after outlier removal");
  }
  std::vector<RigidTransform> kept = transforms;
  if (policy.drop_most_deviant > 0) {
    Vector3 med;
    for (int a = 0; a < 3; ++a) {
      std::vector<double> c;
      for (const auto& t : transforms) c.push_back(t.translation()(a));
      med(a) = median_of(c);
    }
    std::vector<std::size_t> idx(transforms.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      return (transforms[i].translation() - med).norm() < (transforms[j].translation() - med).norm();
    });
    idx.resize(transforms.size() - policy.drop_most_deviant);
    std::sort(idx.begin(), idx.end());
    kept.clear();
    for (std::size_t i : idx) kept.push_back(transforms[i]);
  }

  RepeatabilityReport out;
  out.n_trials = kept.size();
  out.outliers_removed = transforms.size() - kept.size();
  const Matrix3 rmean = mean_rotation(kept);
  for (int a = 0; a < 3; ++a) {
    std::vector<double> tc;
    std::vector<double> rc;
    for (const auto& t : kept) {
      tc.push_back(t.translation()(a));
      rc.push_back(rotation_log_deg(t.rotation() * rmean.transpose())(a));
    }
    const SampleStats ts = sample_stats(tc);
    out.translation_mean(a) = ts.mean;
    out.translation_std(a) = ts.std;
    out.rotation_std(a) = sample_stats(rc).std;
  }
  return out;
}

Vector6 to_vector6(const RigidTransform& t) {
  Vector6 v;
  v.head<3>() = t.translation();
  v.tail<3>() = t.rotation_vector_deg();
  return v;
}

WorkspaceReport workspace_summary(const std::vector<WorkspaceGroup>& groups) {
  if (groups.size() < 2) {
    throw Error(ErrorCode::kCountMismatch, "workspace summary needs at least 2 workspaces");
  }
  WorkspaceReport out;
  Vector3 gmin = Vector3::Constant(std::numeric_limits<double>::infinity());
  Vector3 gmax = -gmin;
  for (const auto& g : groups) {
    if (g.transforms.empty()) {
      throw Error(ErrorCode::kCountMismatch, "workspace '" + g.workspace + "' has no trials");
    }
    WorkspaceCluster c;
    c.workspace = g.workspace;
    Vector3 lo = Vector3::Constant(std::numeric_limits<double>::infinity());
    Vector3 hi = -lo;
    for (const auto& t : g.transforms) {
      c.vectors.push_back(to_vector6(t));
      lo = lo.cwiseMin(t.translation());
      hi = hi.cwiseMax(t.translation());
      c.translation_centroid += t.translation();
    }
    c.translation_centroid /= static_cast<double>(g.transforms.size());
    double sq = 0.0;
    for (const auto& t : g.transforms) sq += (t.translation() - c.translation_centroid).squaredNorm();
    c.rms_spread = std::sqrt(sq / static_cast<double>(g.transforms.size()));
    c.translation_range = hi - lo;
    gmin = gmin.cwiseMin(lo);
    gmax = gmax.cwiseMax(hi);
    out.max_within_spread = std::max(out.max_within_spread, c.rms_spread);
    out.clusters.push_back(std::move(c));
  }
  out.combined_translation_range = gmax - gmin;
  out.min_centroid_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < out.clusters.size(); ++j) {
      out.min_centroid_separation =
          std::min(out.min_centroid_separation,
                   (out.clusters[i].translation_centroid - out.clusters[j].translation_centroid).norm());
    }
  }
  return out;
}

AlignmentTable alignment_table(const std::vector<AlignmentError>& errors) {
  if (errors.empty()) throw Error(ErrorCode::kCountMismatch, "alignment table needs at least 1 alignment");
  AlignmentTable out;
  out.n = errors.size();
  for (std::size_t a = 0; a < 6; ++a) {
    std::vector<double> v;
    for (const auto& e : errors) v.push_back(std::abs(e.components()[a]));
    const SampleStats s = sample_stats(v);
    out.mean[a] = s.mean;
    out.std[a] = s.std;
  }
  return out;
}

double sign_test_p_value(std::size_t successes, std::size_t n) {
  // Sum C(n,k) / 2^n for k >= successes via log-gamma to stay finite for large n.
  double p = 0.0;
  for (std::size_t k = successes; k <= n; ++k) {
    const double log_c = std::lgamma(static_cast<double>(n) + 1.0) -
                         std::lgamma(static_cast<double>(k) + 1.0) -
                         std::lgamma(static_cast<double>(n - k) + 1.0);
    p += std::exp(log_c - static_cast<double>(n) * std::log(2.0));
  }
  return std::min(p, 1.0);
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kCountMismatch, "spearman_rho needs two equal-length series (n >= 2)");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = mean_of(rx);
  const double my = mean_of(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace gbec
