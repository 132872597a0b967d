#include "gbec_cli/commands.hpp"

#include "gbec/config.hpp"
#include "gbec/error.hpp"
#include "gbec/io.hpp"
#include "gbec/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

namespace gbec::cli {
namespace fs = std::filesystem;

namespace {

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct CalibrateArgs {
  std::string spec;
  std::string dig;
  std::string poses;
  std::string method = "gbec";
  std::string pairing = "consecutive";
  std::string out;
};

struct ReportArgs {
  std::string archive;
  std::string kind;
  std::string out;
  std::size_t drop_outliers = 0;
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Files are rendered in memory first; nothing touches the output directory
// until every computation has succeeded.
using FileSet = std::vector<std::pair<fs::path, std::string>>;

void commit(const fs::path& dir, const FileSet& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) {
    if (name.has_parent_path()) {
      fs::create_directories(dir / name.parent_path(), ec);
      if (ec) throw Error(ErrorCode::kIoError, "cannot create " + (dir / name.parent_path()).string());
    }
    io::atomic_write(dir / name, content);
  }
}

bool is_degeneracy(ErrorCode c) {
  switch (c) {
    case ErrorCode::kDegenerateGeometry:
    case ErrorCode::kCountMismatch:
    case ErrorCode::kMissingFeature:
    case ErrorCode::kInsufficientMotion:
    case ErrorCode::kSingularSystem:
    case ErrorCode::kInvalidRange:
      return true;
    default:
      return false;
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(a.config);
  } catch (const Error& e) {
    err << "gbec simulate: " << e.what() << "\n";
    return kConfigError;
  }
  if (a.seed) cfg.master_seed = *a.seed;
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (cfg.output_dir.empty()) {
    err << "gbec simulate: no output directory (set 'output' in the config or pass --out)\n";
    return kConfigError;
  }

  FileSet files;
  CampaignReport report;
  try {
    report = run_experiment_campaign(cfg);
    std::ostringstream archive;
    io::write_archive(archive, report);
    files.emplace_back("archive.jsonl", archive.str());
    files.emplace_back("campaign_report.json", campaign_report_json(report));
    files.emplace_back("campaign_report.txt", campaign_report_text(report));
    io::TransformRecord truth{report.truth, 0.0, Method::kGbec,
                              {{"source", "simulation truth"}, {"campaign", report.campaign}}};
    files.emplace_back("truth.transform", io::format_transform_record(truth));
    for (const auto& t : report.trials) {
      if (!t.digitization) continue;
      char name[64];
      std::snprintf(name, sizeof name, "digitizations/trial_%04zu.csv", t.trial.metadata.trial_index);
      std::ostringstream os;
      io::write_digitization(os, *t.digitization);
      files.emplace_back(name, os.str());
    }
  } catch (const Error& e) {
    err << "gbec simulate: " << e.what() << "\n";
    return kSolverFailure;
  }

  try {
    commit(cfg.output_dir, files);
  } catch (const Error& e) {
    err << "gbec simulate: " << e.what() << "\n";
    return kSolverFailure;
  }
  out << campaign_report_text(report);
  out << "wrote " << report.trials.size() << " trials to " << (cfg.output_dir / "archive.jsonl").string() << "\n";
  return kOk;
}

std::string residual_table(const CalibrationTrial& trial) {
  std::ostringstream os;
  os << "feature  n  mean_mm  max_mm\n";
  for (const auto& f : trial.feature_residuals) {
    const double mx = f.residuals.empty() ? 0.0 : *std::max_element(f.residuals.begin(), f.residuals.end());
    os << f.id << "  " << f.residuals.size() << "  " << fixed(f.mean) << "  " << fixed(mx) << "\n";
  }
  if (trial.registration) os << "overall rms_mm " << fixed(trial.registration->rms_residual) << "\n";
  return os.str();
}

std::string axxb_table(const AxxbDiagnostics& d) {
  std::ostringstream os;
  os << "motion_pairs " << d.pair_count << "\n";
  os << "rotation_rms_deg " << fixed(d.rotation_rms_deg) << "\n";
  os << "translation_rms_mm " << fixed(d.translation_rms_mm) << "\n";
  return os.str();
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  const Method method = method_from_string(a.method);
  AttachmentSpec spec;
  DigitizationSet dig;
  std::vector<PoseSample> poses;
  Pairing pairing = Pairing::kConsecutive;
  try {
    if (method == Method::kGbec) {
      if (a.spec.empty() || a.dig.empty()) {
        err << "gbec calibrate: --method gbec needs --spec and --dig\n";
        return kConfigError;
      }
      spec = io::resolve_attachment(a.spec, fs::current_path());
      dig = io::read_digitization(a.dig);
    } else {
      if (a.poses.empty()) {
        err << "gbec calibrate: --method axxb needs --poses\n";
        return kConfigError;
      }
      poses = io::read_pose_stream(a.poses);
      pairing = pairing_from_string(a.pairing);
    }
  } catch (const Error& e) {
    err << "gbec calibrate: " << e.what() << "\n";
    return is_degeneracy(e.code()) ? kDegenerate : kConfigError;
  }

  CalibrationTrial trial;
  try {
    if (method == Method::kGbec) {
      trial = run_gbec(spec, dig);
    } else {
      trial = solve_axxb(build_motion_pairs(poses, pairing));
    }
  } catch (const Error& e) {
    err << "gbec calibrate: " << e.what() << "\n";
    return is_degeneracy(e.code()) ? kDegenerate : kSolverFailure;
  }

  io::TransformRecord rec;
  rec.transform = trial.result;
  rec.method = method;
  std::string table;
  if (method == Method::kGbec) {
    rec.rms_residual = trial.registration ? trial.registration->rms_residual : 0.0;
    rec.metadata["attachment"] = spec.name;
    rec.metadata["digitization"] = fs::path(a.dig).filename().string();
    rec.metadata["features"] = std::to_string(trial.feature_residuals.size());
    table = residual_table(trial);
  } else {
    rec.rms_residual = trial.axxb->translation_rms_mm;
    rec.metadata["poses"] = fs::path(a.poses).filename().string();
    rec.metadata["pairing"] = std::string(to_string(pairing));
    rec.metadata["motion_pairs"] = std::to_string(trial.axxb->pair_count);
    table = axxb_table(*trial.axxb);
  }
  rec.metadata["frames"] = std::string(kEffectorFrame) + "_T_" + std::string(kMarkerFrame);

  try {
    commit(a.out, {{"calibration.transform", io::format_transform_record(rec)}, {"residuals.txt", table}});
  } catch (const Error& e) {
    err << "gbec calibrate: " << e.what() << "\n";
    return kSolverFailure;
  }
  out << io::format_transform_record(rec) << table;
  return kOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const ReportKind kind = report_kind_from_string(a.kind);
    const io::Archive archive = io::read_archive(a.archive);
    const RenderedReport r = render_report(kind, archive.header, archive.trials, OutlierPolicy{a.drop_outliers});
    const fs::path dir = a.out.empty() ? fs::path(a.archive).parent_path() : fs::path(a.out);
    const std::string base(to_string(kind));
    commit(dir.empty() ? fs::path(".") : dir,
           {{base + ".txt", r.text}, {base + ".json", r.json}, {base + "_plot.csv", r.plot_csv}});
    out << r.text;
    return kOk;
  } catch (const Error& e) {
    err << "gbec report: " << e.what() << "\n";
    return kReportError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometry-based end-effector calibration"};
  app.name("gbec");
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a simulated calibration campaign");
  sim_cmd->add_option("--config", sim.config, "Experiment config file")->required();
  sim_cmd->add_option("--out", sim.out, "Output directory (overrides the config)");
  sim_cmd->add_option("--seed", sim.seed, "Master seed (overrides the config)");

  CalibrateArgs cal;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "Calibrate from recorded data");
  cal_cmd->add_option("--spec", cal.spec, "Attachment spec file or builtin:<name>");
  cal_cmd->add_option("--dig", cal.dig, "Digitization file");
  cal_cmd->add_option("--poses", cal.poses, "Pose-stream file (axxb)");
  cal_cmd->add_option("--method", cal.method, "gbec or axxb")->check(CLI::IsMember({"gbec", "axxb"}));
  cal_cmd->add_option("--pairing", cal.pairing, "consecutive or all_pairs")
      ->check(CLI::IsMember({"consecutive", "all_pairs"}));
  cal_cmd->add_option("--out", cal.out, "Output directory")->required();

  ReportArgs rep;
  CLI::App* rep_cmd = app.add_subcommand("report", "Render a report from a trial archive");
  rep_cmd->add_option("--archive", rep.archive, "Trial archive (archive.jsonl)")->required();
  rep_cmd->add_option("--report", rep.kind, "residuals, fle, repeatability, workspace or alignment")->required();
  rep_cmd->add_option("--out", rep.out, "Output directory (default: next to the archive)");
  rep_cmd->add_option("--drop-outliers", rep.drop_outliers, "Drop the k most deviant trials");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "gbec: " << e.what() << "\n";
    return kConfigError;
  }

  if (sim_cmd->parsed()) return cmd_simulate(sim, out, err);
  if (cal_cmd->parsed()) return cmd_calibrate(cal, out, err);
  return cmd_report(rep, out, err);
}

}  // namespace gbec::cli
