#pragma once

#include "gbec/campaign.hpp"

#include <filesystem>
#include <string>

namespace gbec {

// Parses an experiment config (YAML with unit-suffixed values, e.g.
// "tracker_sigma: 0.25 mm"). Attachment paths resolve against base_dir.
// Every problem raises ConfigInvalid carrying the offending line number.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Canonical text form; parse_experiment_config(format_experiment_config(c))
// reproduces c up to rounding of rotation vectors. The attachment is written
// as its original reference.
std::string format_experiment_config(const ExperimentConfig& config);

}  // namespace gbec
