#include "gbec/error.hpp"
#include "gbec/io.hpp"
#include "gbec/simulator.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace gbec {
namespace {

namespace fs = std::filesystem;

std::string parse_error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    return e.what();
  }
  ADD_FAILURE() << "no exception";
  return {};
}

TEST(DigitizationFile, RoundTripIsExact) {
  NoiseSpec n;
  n.seed = 11;
  for (const AttachmentSpec& spec : {default_tms_holder(), default_rdid()}) {
    const DigitizationSet dig = simulate_digitization(default_scene(spec), n);
    std::stringstream ss;
    io::write_digitization(ss, dig);
    const DigitizationSet back = io::read_digitization(ss);
    EXPECT_EQ(back.attachment, dig.attachment);
    EXPECT_EQ(back.frame, dig.frame);
    EXPECT_EQ(back.points_per_groove, dig.points_per_groove);
    ASSERT_EQ(back.features.size(), dig.features.size());
    for (std::size_t i = 0; i < dig.features.size(); ++i) {
      EXPECT_EQ(back.features[i].id, dig.features[i].id);
      EXPECT_EQ(back.features[i].cloud.points, dig.features[i].cloud.points);
    }
  }
}

TEST(DigitizationFile, ErrorsCarryLineNumbers) {
  const std::string head = "# gbec-digitization v1\n# attachment: x\n# frame: coilRef\nfeature,index,x_mm,y_mm,z_mm\n";
  std::string msg = parse_error_message([&] {
    std::istringstream in(head + "g1,0,1,2,3\ng1,0,1,2,3\n");
    io::read_digitization(in);
  });
  EXPECT_NE(msg.find("line 6"), std::string::npos) << msg;
  msg = parse_error_message([&] {
    std::istringstream in(head + "g1,0,1,2\n");
    io::read_digitization(in);
  });
  EXPECT_NE(msg.find("line 5"), std::string::npos) << msg;
  msg = parse_error_message([&] {
    std::istringstream in(head + "g1,0,1,abc,3\n");
    io::read_digitization(in);
  });
  EXPECT_NE(msg.find("line 5"), std::string::npos) << msg;
  parse_error_message([&] {
    std::istringstream in("feature,index,x_mm,y_mm,z_mm\ng1,0,1,2,3\n");
    io::read_digitization(in);
  });
}

TEST(PoseStreamFile, RoundTripIsExact) {
  NoiseSpec n;
  n.seed = 3;
  n.robot_translation_sigma = 2.0;
  const auto samples = simulate_pose_stream(default_scene(default_tms_holder()), WorkspaceSpec{}, n);
  std::stringstream ss;
  io::write_pose_stream(ss, samples);
  const auto back = io::read_pose_stream(ss);
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(back[i].robot_pose, samples[i].robot_pose);
    EXPECT_EQ(back[i].marker_pose, samples[i].marker_pose);
  }
}

TEST(PoseStreamFile, RejectsShortRecordsAndBadRotations) {
  std::string msg = parse_error_message([] {
    std::istringstream in("# c\n1 0 0 0 1 0 0 0 1 0 0 0\n");
    io::read_pose_stream(in);
  });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  msg = parse_error_message([] {
    std::istringstream in("2 0 0 0 1 0 0 0 1 0 0 0 1 0 0 0 1 0 0 0 1 0 0 0\n");
    io::read_pose_stream(in);
  });
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
}

TEST(TransformRecord, RoundTripIsExact) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    io::TransformRecord rec{test::random_transform(rng), 0.123456789012345678, k % 2 ? Method::kAxxb : Method::kGbec,
                            {{"attachment", "tms_holder"}, {"note", "trial " + std::to_string(k)}}};
    const io::TransformRecord back = io::parse_transform_record(io::format_transform_record(rec));
    EXPECT_EQ(back, rec);
  }
}

TEST(TransformRecord, RejectsInvalidRotation) {
  const std::string text =
      "format: gbec-transform/1\nmethod: gbec\nrotation:\n  - [1, 0, 0]\n  - [0, 1, 0]\n  - [0, 0, -1]\n"
      "translation_mm: [0, 0, 0]\nrms_residual_mm: 0\n";
  const std::string msg = parse_error_message([&] { io::parse_transform_record(text); });
  EXPECT_NE(msg.find("line"), std::string::npos) << msg;
}

TEST(AttachmentFile, RoundTrip) {
  for (const AttachmentSpec& spec : {default_tms_holder(), default_rdid()}) {
    const AttachmentSpec back = io::parse_attachment(io::format_attachment(spec));
    EXPECT_EQ(back.name, spec.name);
    EXPECT_EQ(back.kind, spec.kind);
    EXPECT_EQ(back.radius_mm, spec.radius_mm);
    ASSERT_EQ(back.feature_ids(), spec.feature_ids());
    if (spec.kind == AttachmentKind::kGrooves) {
      EXPECT_EQ(back.grooves().samples_per_groove, spec.grooves().samples_per_groove);
      for (std::size_t k = 0; k < spec.grooves().grooves.size(); ++k) {
        const Groove& a = spec.grooves().grooves[k];
        const Groove& b = back.grooves().grooves[k];
        EXPECT_LT((a.start() - b.start()).norm(), 1e-12);
        EXPECT_LT((a.end() - b.end()).norm(), 1e-12);
      }
    } else {
      for (std::size_t k = 0; k < spec.points().landmarks.size(); ++k) {
        EXPECT_EQ(back.points().landmarks[k].position, spec.points().landmarks[k].position);
      }
    }
  }
}

TEST(AttachmentFile, ExplicitGrooveForm) {
  const std::string text = R"(name: wedge
kind: grooves
samples_per_groove: 6
grooves:
  - id: a
    anchor: 0 0 0 mm
    direction: 1 0 0
    extent: 0 30 mm
  - id: b
    anchor: 0 10 5 mm
    direction: 0 1 1
    extent: 0 20 mm
)";
  const AttachmentSpec s = io::parse_attachment(text);
  EXPECT_EQ(s.name, "wedge");
  EXPECT_EQ(s.grooves().samples_per_groove, 6u);
  ASSERT_EQ(s.grooves().grooves.size(), 2u);
  EXPECT_NEAR(s.grooves().grooves[1].line.direction().norm(), 1.0, 1e-12);
  EXPECT_EQ(s.grooves().grooves[0].length(), 30.0);
}

TEST(AttachmentFile, ErrorsNameTheLine) {
  const std::string text = "name: wedge\nkind: grooves\ngrooves:\n  - id: a\n    anchor: 0 0 mm\n    direction: 1 0 0\n    extent: 0 30 mm\n";
  const std::string msg = parse_error_message([&] { io::parse_attachment(text); });
  EXPECT_NE(msg.find("line 5"), std::string::npos) << msg;
  const std::string unknown = "template: tms_holder\nradius: 40 mm\ngroove_heights: 0 12 mm\ncolour: red\n";
  const std::string msg2 = parse_error_message([&] { io::parse_attachment(unknown); });
  EXPECT_NE(msg2.find("line 4"), std::string::npos) << msg2;
}

TEST(AttachmentFile, ResolveBuiltins) {
  EXPECT_EQ(io::resolve_attachment("builtin:tms_holder", ".").name, "tms_holder");
  EXPECT_EQ(io::resolve_attachment("builtin:rdid", ".").name, "rdid");
  EXPECT_EQ(io::resolve_attachment("tms_holder.yaml", GBEC_DATA_DIR).name, "tms_holder");
  EXPECT_THROW(io::resolve_attachment("no_such_file.yaml", GBEC_DATA_DIR), Error);
}

CampaignReport small_campaign(bool export_dig) {
  ExperimentConfig c;
  c.campaign = "io";
  c.master_seed = 5;
  c.attachment_ref = "builtin:tms_holder";
  c.scene = default_scene(default_tms_holder());
  c.workspaces = {WorkspaceSpec{}};
  c.workspaces[0].n_poses = 10;
  c.gbec_trials = 3;
  c.axxb_trials = 2;
  c.alignments = 2;
  c.export_digitizations = export_dig;
  return run_experiment_campaign(c);
}

TEST(Archive, TrialRecordsRoundTrip) {
  const CampaignReport report = small_campaign(true);
  for (const auto& t : report.trials) {
    const std::string line = io::format_trial(t);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    const TrialReport back = io::parse_trial(line);
    EXPECT_EQ(io::format_trial(back), line);
    EXPECT_EQ(back.trial.result, t.trial.result);
    EXPECT_EQ(back.trial.metadata.seed, t.trial.metadata.seed);
    EXPECT_EQ(back.digitization.has_value(), t.digitization.has_value());
  }
}

TEST(Archive, WholeArchiveRoundTrip) {
  const CampaignReport report = small_campaign(false);
  std::stringstream ss;
  io::write_archive(ss, report);
  const std::string text = ss.str();
  const io::Archive a = io::read_archive(ss);
  EXPECT_EQ(a.header.campaign, "io");
  EXPECT_EQ(a.header.master_seed, 5u);
  EXPECT_EQ(a.header.truth, report.truth);
  ASSERT_EQ(a.trials.size(), report.trials.size());
  CampaignReport again{a.header.campaign, a.header.master_seed, a.header.attachment, a.header.truth, a.trials, {}};
  std::stringstream out;
  io::write_archive(out, again);
  EXPECT_EQ(out.str(), text);
}

TEST(Archive, EmptyAndMalformed) {
  std::istringstream empty("");
  EXPECT_THROW(io::read_archive(empty), Error);
  const std::string msg = parse_error_message([] {
    std::istringstream in(R"({"type":"campaign","format":"gbec-archive/1","campaign":"x","master_seed":1,"attachment":"a","truth":{"rotation":[[1,0,0],[0,1,0],[0,0,1]],"translation":[0,0,0]}})"
                          "\n{not json}\n");
    io::read_archive(in);
  });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(AtomicWrite, ReplacesWholeFile) {
  const fs::path dir = fs::temp_directory_path() / "gbec_atomic_write_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path p = dir / "out.txt";
  io::atomic_write(p, "first");
  io::atomic_write(p, "second");
  EXPECT_EQ(io::read_text_file(p), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(io::atomic_write(dir / "missing" / "x.txt", "y"), Error);
  fs::remove_all(dir);
}

TEST(FormatDouble, RoundTripsBits) {
  for (double v : {0.1, 1.0 / 3.0, -1e-300, 123456789.123456789, 0.0}) {
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
}

}  // namespace
}  // namespace gbec
