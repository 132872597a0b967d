#include "gbec/report.hpp"

#include "gbec/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <iomanip>
#include <sstream>

namespace gbec {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 3> kAxes = {"x", "y", "z"};
constexpr std::array<const char*, 6> kAlignmentAxes = {"x_mm", "y_mm", "z_mm", "rx_deg", "ry_deg", "rz_deg"};

std::string fixed(double v, int precision = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

json vec_json(const Vector3& v) { return {v.x(), v.y(), v.z()}; }

json residuals_json(const ResidualReport& r) {
  json features = json::array();
  for (const auto& f : r.features) {
    features.push_back({{"id", f.id}, {"n", f.per_feature.n}, {"mean_mm", f.per_feature.mean},
                        {"std_mm", f.per_feature.std}});
  }
  return {{"features", features},
          {"overall", {{"n", r.overall.n}, {"mean_mm", r.overall.mean}, {"std_mm", r.overall.std}}}};
}

json fle_json(const std::vector<FleSummaryRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"id", r.id}, {"mean_pre_mm", r.mean_pre}, {"mean_post_mm", r.mean_post},
                   {"reduction_percent", r.reduction_percent}, {"trials_reduced", r.trials_reduced},
                   {"trials", r.trials}, {"sign_test_p", r.sign_test_p}});
  }
  return out;
}

json repeatability_json(const RepeatabilityReport& r) {
  return {{"n_trials", r.n_trials},
          {"outliers_removed", r.outliers_removed},
          {"translation_mean_mm", vec_json(r.translation_mean)},
          {"translation_std_mm", vec_json(r.translation_std)},
          {"rotation_std_deg", vec_json(r.rotation_std)}};
}

json workspace_json(const WorkspaceReport& w) {
  json clusters = json::array();
  for (const auto& c : w.clusters) {
    json vectors = json::array();
    for (const auto& v : c.vectors) vectors.push_back({v(0), v(1), v(2), v(3), v(4), v(5)});
    clusters.push_back({{"workspace", c.workspace},
                        {"translation_range_mm", vec_json(c.translation_range)},
                        {"translation_centroid_mm", vec_json(c.translation_centroid)},
                        {"rms_spread_mm", c.rms_spread},
                        {"vectors", vectors}});
  }
  return {{"clusters", clusters},
          {"combined_translation_range_mm", vec_json(w.combined_translation_range)},
          {"min_centroid_separation_mm", w.min_centroid_separation},
          {"max_within_spread_mm", w.max_within_spread}};
}

json alignment_json(const AlignmentTable& t) {
  json mean = json::object();
  json sd = json::object();
  for (std::size_t a = 0; a < 6; ++a) {
    mean[kAlignmentAxes[a]] = t.mean[a];
    sd[kAlignmentAxes[a]] = t.std[a];
  }
  return {{"n", t.n}, {"mean", mean}, {"std", sd}};
}

void residuals_text(std::ostream& os, const ResidualReport& r) {
  os << "Landmark residuals (per-feature mean over registered points)\n";
  os << std::left << std::setw(12) << "feature" << std::right << std::setw(8) << "n" << std::setw(14)
     << "mean_mm" << std::setw(14) << "std_mm" << "\n";
  for (const auto& f : r.features) {
    os << std::left << std::setw(12) << f.id << std::right << std::setw(8) << f.per_feature.n << std::setw(14)
       << fixed(f.per_feature.mean) << std::setw(14) << fixed(f.per_feature.std) << "\n";
  }
  os << std::left << std::setw(12) << "overall" << std::right << std::setw(8) << r.overall.n << std::setw(14)
     << fixed(r.overall.mean) << std::setw(14) << fixed(r.overall.std) << "\n";
}

void fle_text(std::ostream& os, const std::vector<FleSummaryRow>& rows) {
  os << "FLE before/after line-fit correction\n";
  os << std::left << std::setw(12) << "feature" << std::right << std::setw(14) << "pre_mm" << std::setw(14)
     << "post_mm" << std::setw(14) << "reduction_%" << std::setw(10) << "reduced" << std::setw(8) << "n"
     << std::setw(14) << "sign_p" << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(12) << r.id << std::right << std::setw(14) << fixed(r.mean_pre) << std::setw(14)
       << fixed(r.mean_post) << std::setw(14) << fixed(r.reduction_percent) << std::setw(10) << r.trials_reduced
       << std::setw(8) << r.trials << std::setw(14) << std::scientific << std::setprecision(6) << r.sign_test_p
       << std::defaultfloat << "\n";
  }
}

void repeatability_text(std::ostream& os, Method m, const RepeatabilityReport& r) {
  os << "Repeatability (" << to_string(m) << ", n=" << r.n_trials << ", outliers removed=" << r.outliers_removed
     << ")\n";
  os << std::left << std::setw(6) << "axis" << std::right << std::setw(16) << "mean_t_mm" << std::setw(16)
     << "std_t_mm" << std::setw(16) << "std_r_deg" << "\n";
  for (int a = 0; a < 3; ++a) {
    os << std::left << std::setw(6) << kAxes[a] << std::right << std::setw(16) << fixed(r.translation_mean(a))
       << std::setw(16) << fixed(r.translation_std(a)) << std::setw(16) << fixed(r.rotation_std(a)) << "\n";
  }
}

void workspace_text(std::ostream& os, Method m, const WorkspaceReport& w) {
  os << "Workspace clusters (" << to_string(m) << ")\n";
  os << std::left << std::setw(12) << "workspace" << std::right << std::setw(6) << "n" << std::setw(14)
     << "range_x_mm" << std::setw(14) << "range_y_mm" << std::setw(14) << "range_z_mm" << std::setw(14)
     << "spread_mm" << "\n";
  for (const auto& c : w.clusters) {
    os << std::left << std::setw(12) << c.workspace << std::right << std::setw(6) << c.vectors.size()
       << std::setw(14) << fixed(c.translation_range.x()) << std::setw(14) << fixed(c.translation_range.y())
       << std::setw(14) << fixed(c.translation_range.z()) << std::setw(14) << fixed(c.rms_spread) << "\n";
  }
  os << std::left << std::setw(18) << "combined" << std::right << std::setw(14)
     << fixed(w.combined_translation_range.x()) << std::setw(14) << fixed(w.combined_translation_range.y())
     << std::setw(14) << fixed(w.combined_translation_range.z()) << "\n";
  os << "min centroid separation: " << fixed(w.min_centroid_separation)
     << " mm, max within-workspace spread: " << fixed(w.max_within_spread) << " mm\n";
}

void alignment_text(std::ostream& os, const AlignmentTable& t) {
  os << "Tool alignment errors (absolute, n=" << t.n << ")\n";
  os << std::left << std::setw(8) << "" << std::right;
  for (const auto* a : kAlignmentAxes) os << std::setw(12) << a;
  os << "\n" << std::left << std::setw(8) << "STD" << std::right;
  for (double v : t.std) os << std::setw(12) << fixed(v);
  os << "\n" << std::left << std::setw(8) << "Mean" << std::right;
  for (double v : t.mean) os << std::setw(12) << fixed(v);
  os << "\n";
}

void require_trials(const std::vector<TrialReport>& trials) {
  if (trials.empty()) throw Error(ErrorCode::kCountMismatch, "no trials in archive");
}

}  // namespace

std::string_view to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::kResiduals: return "residuals";
    case ReportKind::kFle: return "fle";
    case ReportKind::kRepeatability: return "repeatability";
    case ReportKind::kWorkspace: return "workspace";
    case ReportKind::kAlignment: return "alignment";
  }
  return "unknown";
}

ReportKind report_kind_from_string(std::string_view name) {
  for (auto k : {ReportKind::kResiduals, ReportKind::kFle, ReportKind::kRepeatability, ReportKind::kWorkspace,
                 ReportKind::kAlignment}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kParseError, "unknown report kind '" + std::string(name) + "'");
}

RenderedReport render_report(ReportKind kind, const io::ArchiveHeader& header,
                             const std::vector<TrialReport>& trials, const OutlierPolicy& policy) {
  require_trials(trials);
  const CampaignSummary s = summarize(trials, policy);
  RenderedReport out;
  std::ostringstream text;
  std::ostringstream csv;
  csv << std::setprecision(17);
  json j = {{"campaign", header.campaign}, {"report", std::string(to_string(kind))}};
  text << "campaign: " << header.campaign << "\n";

  switch (kind) {
    case ReportKind::kResiduals: {
      if (!s.residuals) throw Error(ErrorCode::kCountMismatch, "no GBEC trials in archive");
      residuals_text(text, *s.residuals);
      j["residuals"] = residuals_json(*s.residuals);
      csv << "trial,feature,mean_residual_mm\n";
      for (const auto& t : trials) {
        for (const auto& f : t.trial.feature_residuals) {
          csv << t.trial.metadata.trial_index << ',' << f.id << ',' << f.mean << '\n';
        }
      }
      break;
    }
    case ReportKind::kFle: {
      if (s.fle.empty()) {
        throw Error(ErrorCode::kGroovesRequired, "archive has no groove FLE data (point-landmark campaign?)");
      }
      fle_text(text, s.fle);
      j["fle"] = fle_json(s.fle);
      if (s.line_regression) {
        text << "line regression error, mean over trials: " << fixed(s.line_regression->mean) << " mm (std "
             << fixed(s.line_regression->std) << ")\n";
        j["line_regression"] = {{"mean_mm", s.line_regression->mean}, {"std_mm", s.line_regression->std},
                                {"n", s.line_regression->n}};
      }
      csv << "trial,feature,mean_regression_mm,mean_pre_mm,mean_post_mm\n";
      for (const auto& t : trials) {
        if (!t.fle) continue;
        for (std::size_t i = 0; i < t.fle->features.size(); ++i) {
          const auto& f = t.fle->features[i];
          const double reg = t.regression ? t.regression->grooves.at(i).stats.mean : 0.0;
          csv << t.trial.metadata.trial_index << ',' << f.id << ',' << reg << ',' << f.mean_pre << ','
              << f.mean_post << '\n';
        }
      }
      break;
    }
    case ReportKind::kRepeatability: {
      if (s.repeatability.empty()) throw Error(ErrorCode::kCountMismatch, "repeatability needs >= 2 trials of a method");
      json rep = json::object();
      for (const auto& [m, r] : s.repeatability) {
        repeatability_text(text, m, r);
        rep[std::string(to_string(m))] = repeatability_json(r);
      }
      j["repeatability"] = rep;
      csv << "method,trial,tx_mm,ty_mm,tz_mm,rx_deg,ry_deg,rz_deg\n";
      for (const auto& t : trials) {
        const Vector6 v = to_vector6(t.trial.result);
        csv << to_string(t.trial.method) << ',' << t.trial.metadata.trial_index;
        for (int k = 0; k < 6; ++k) csv << ',' << v(k);
        csv << '\n';
      }
      break;
    }
    case ReportKind::kWorkspace: {
      if (s.workspaces.empty()) throw Error(ErrorCode::kCountMismatch, "workspace report needs >= 2 workspaces");
      json ws = json::object();
      for (const auto& [m, w] : s.workspaces) {
        workspace_text(text, m, w);
        ws[std::string(to_string(m))] = workspace_json(w);
      }
      j["workspace"] = ws;
      csv << "method,workspace,trial,tx_mm,ty_mm,tz_mm,rx_deg,ry_deg,rz_deg\n";
      for (const auto& t : trials) {
        const Vector6 v = to_vector6(t.trial.result);
        csv << to_string(t.trial.method) << ',' << t.trial.metadata.workspace << ','
            << t.trial.metadata.trial_index;
        for (int k = 0; k < 6; ++k) csv << ',' << v(k);
        csv << '\n';
      }
      break;
    }
    case ReportKind::kAlignment: {
      if (!s.alignment) throw Error(ErrorCode::kCountMismatch, "archive holds no alignment trials");
      alignment_text(text, *s.alignment);
      j["alignment"] = alignment_json(*s.alignment);
      csv << "trial,x_mm,y_mm,z_mm,rx_deg,ry_deg,rz_deg\n";
      for (const auto& t : trials) {
        if (!t.alignment) continue;
        csv << t.trial.metadata.trial_index;
        for (double v : t.alignment->components()) csv << ',' << v;
        csv << '\n';
      }
      break;
    }
  }
  out.text = text.str();
  out.json = j.dump(2) + "\n";
  out.plot_csv = csv.str();
  return out;
}

std::string campaign_report_json(const CampaignReport& report) {
  const CampaignSummary& s = report.summary;
  json j;
  j["campaign"] = report.campaign;
  j["master_seed"] = report.master_seed;
  j["attachment"] = report.attachment;
  json counts = json::object();
  for (const auto& [m, n] : s.trial_counts) counts[std::string(to_string(m))] = n;
  j["trial_counts"] = counts;
  j["truth"] = {{"translation_mm", vec_json(report.truth.translation())},
                {"rotation_vector_deg", vec_json(report.truth.rotation_vector_deg())}};
  if (s.residuals) j["residuals"] = residuals_json(*s.residuals);
  if (!s.fle.empty()) j["fle"] = fle_json(s.fle);
  if (s.line_regression) {
    j["line_regression"] = {{"mean_mm", s.line_regression->mean}, {"std_mm", s.line_regression->std}};
  }
  json rep = json::object();
  for (const auto& [m, r] : s.repeatability) rep[std::string(to_string(m))] = repeatability_json(r);
  j["repeatability"] = rep;
  json ws = json::object();
  for (const auto& [m, w] : s.workspaces) ws[std::string(to_string(m))] = workspace_json(w);
  j["workspace"] = ws;
  if (s.alignment) j["alignment"] = alignment_json(*s.alignment);
  return j.dump(2) + "\n";
}

std::string campaign_report_text(const CampaignReport& report) {
  const CampaignSummary& s = report.summary;
  std::ostringstream os;
  os << "campaign: " << report.campaign << " (seed " << report.master_seed << ", attachment " << report.attachment
     << ")\n";
  for (const auto& [m, n] : s.trial_counts) os << "  " << to_string(m) << " trials: " << n << "\n";
  os << "\n";
  if (s.residuals) {
    residuals_text(os, *s.residuals);
    os << "\n";
  }
  if (!s.fle.empty()) {
    fle_text(os, s.fle);
    os << "\n";
  }
  for (const auto& [m, r] : s.repeatability) {
    repeatability_text(os, m, r);
    os << "\n";
  }
  for (const auto& [m, w] : s.workspaces) {
    workspace_text(os, m, w);
    os << "\n";
  }
  if (s.alignment) alignment_text(os, *s.alignment);
  return os.str();
}

}  // namespace gbec
