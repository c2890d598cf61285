#pragma once

// Structural JSON comparison for golden-transcript tests. Numbers match
// within a relative tolerance; keys naming Monte Carlo empiricals get a
// wide absolute band instead, since their exact values depend on the
// standard library's normal_distribution.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace testsupport {

inline bool json_close(const nlohmann::json& a, const nlohmann::json& b,
                       bool loose, std::string* why) {
  using nlohmann::json;
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    const double tol =
        loose ? 0.25 : 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
    if (std::abs(x - y) <= tol) return true;
    *why = "numbers differ: " + a.dump() + " vs " + b.dump();
    return false;
  }
  if (a.type() != b.type()) {
    *why = "type mismatch: " + a.dump() + " vs " + b.dump();
    return false;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      *why = "object sizes differ: " + a.dump() + " vs " + b.dump();
      return false;
    }
    static const std::set<std::string> loose_keys = {
        "empirical_mse_prediction", "empirical_estimator_variance",
        "standard_error", "estimator_standard_error"};
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        *why = "missing key " + it.key();
        return false;
      }
      if (!json_close(it.value(), b[it.key()],
                      loose || loose_keys.count(it.key()) > 0, why)) {
        *why = "at key " + it.key() + ": " + *why;
        return false;
      }
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      *why = "array sizes differ";
      return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!json_close(a[i], b[i], loose, why)) return false;
    }
    return true;
  }
  if (a == b) return true;
  *why = "values differ: " + a.dump() + " vs " + b.dump();
  return false;
}

// Compares two JSON-lines transcripts. On mismatch fills *why with the
// first offending line number and reason.
inline bool jsonl_close(const std::string& got, const std::string& want,
                        std::string* why) {
  const auto parse_lines = [](const std::string& text) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      if (end > start) out.push_back(text.substr(start, end - start));
      start = end + 1;
    }
    return out;
  };
  const auto got_lines = parse_lines(got);
  const auto want_lines = parse_lines(want);
  if (got_lines.size() != want_lines.size()) {
    *why = "line count " + std::to_string(got_lines.size()) + " vs " +
           std::to_string(want_lines.size());
    return false;
  }
  for (std::size_t i = 0; i < got_lines.size(); ++i) {
    std::string reason;
    if (!json_close(nlohmann::json::parse(got_lines[i]),
                    nlohmann::json::parse(want_lines[i]), false, &reason)) {
      *why = "line " + std::to_string(i + 1) + ": " + reason;
      return false;
    }
  }
  return true;
}

}  // namespace testsupport
