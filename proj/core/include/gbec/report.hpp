#pragma once

#include "gbec/campaign.hpp"
#include "gbec/io.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gbec {

enum class ReportKind { kResiduals, kFle, kRepeatability, kWorkspace, kAlignment };

std::string_view to_string(ReportKind kind);
// Throws ParseError for unknown names.
ReportKind report_kind_from_string(std::string_view name);

struct RenderedReport {
  std::string text;      // human-readable table
  std::string json;      // machine-readable, same numbers at full precision
  std::string plot_csv;  // per-trial series for plotting
};

// Throws Error when the archive holds no trials or lacks the data the kind
// needs (e.g. FLE for point-landmark campaigns).
RenderedReport render_report(ReportKind kind, const io::ArchiveHeader& header,
                             const std::vector<TrialReport>& trials, const OutlierPolicy& policy = {});

// Whole-campaign summary written next to the archive by `gbec simulate`.
std::string campaign_report_json(const CampaignReport& report);
std::string campaign_report_text(const CampaignReport& report);

}  // namespace gbec
