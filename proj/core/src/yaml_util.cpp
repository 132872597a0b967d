#include "yaml_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gbec::detail {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ": ";
}

void fail(ErrorCode code, const YAML::Node& node, const std::string& msg) {
  throw Error(code, where(node) + msg);
}

std::vector<double> parse_numbers(ErrorCode code, const YAML::Node& node, const std::string& unit,
                                  std::size_t expected_count) {
  if (!node.IsScalar()) fail(code, node, "expected a scalar value");
  std::string text = node.Scalar();
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  if (!unit.empty()) {
    if (tokens.empty() || tokens.back() != unit) {
      fail(code, node, "value '" + node.Scalar() + "' must end with unit '" + unit + "'");
    }
    tokens.pop_back();
  }
  std::vector<double> out;
  for (const auto& tok : tokens) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
      fail(code, node, "'" + tok + "' is not a number" + (unit.empty() ? "" : " (unit " + unit + ")"));
    }
    out.push_back(v);
  }
  if (out.empty()) fail(code, node, "missing numeric value");
  if (expected_count != 0 && out.size() != expected_count) {
    fail(code, node, "expected " + std::to_string(expected_count) + " numbers, got " +
                         std::to_string(out.size()));
  }
  return out;
}

double parse_quantity(ErrorCode code, const YAML::Node& node, const std::string& unit) {
  return parse_numbers(code, node, unit, 1).front();
}

Vector3 parse_vector(ErrorCode code, const YAML::Node& node, const std::string& unit) {
  const auto v = parse_numbers(code, node, unit, 3);
  return {v[0], v[1], v[2]};
}

std::string parse_string(ErrorCode code, const YAML::Node& node) {
  if (!node.IsScalar()) fail(code, node, "expected a string");
  return node.Scalar();
}

std::size_t parse_count(ErrorCode code, const YAML::Node& node) {
  const double v = parse_quantity(code, node, "");
  if (v < 0.0 || v != std::floor(v)) fail(code, node, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

void check_keys(ErrorCode code, const YAML::Node& map, const std::vector<std::string>& allowed) {
  if (!map.IsMap()) fail(code, map, "expected a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(code, kv.first, "unknown key '" + key + "'");
    }
  }
}

const YAML::Node require(ErrorCode code, const YAML::Node& map, const std::string& key) {
  const YAML::Node n = map[key];
  if (!n) fail(code, map, "missing required key '" + key + "'");
  return n;
}

}  // namespace gbec::detail
