#pragma once

// Helpers for unit-suffixed YAML values such as "0.25 mm" or "400 0 300 mm".

#include "gbec/error.hpp"
#include "gbec/geometry.hpp"

#include <yaml-cpp/yaml.h>

#include <string>
#include <vector>

namespace gbec::detail {

std::string where(const YAML::Node& node);

[[noreturn]] void fail(ErrorCode code, const YAML::Node& node, const std::string& msg);

// Numbers followed by the unit token. An empty unit means dimensionless and
// forbids any suffix.
std::vector<double> parse_numbers(ErrorCode code, const YAML::Node& node,
                                  const std::string& unit, std::size_t expected_count = 0);

double parse_quantity(ErrorCode code, const YAML::Node& node, const std::string& unit);
Vector3 parse_vector(ErrorCode code, const YAML::Node& node, const std::string& unit);
std::string parse_string(ErrorCode code, const YAML::Node& node);
std::size_t parse_count(ErrorCode code, const YAML::Node& node);

// Rejects keys of a map that are not in `allowed`.
void check_keys(ErrorCode code, const YAML::Node& map, const std::vector<std::string>& allowed);
const YAML::Node require(ErrorCode code, const YAML::Node& map, const std::string& key);

}  // namespace gbec::detail
