#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace dmlimits {

inline constexpr int kReportDigits = 12;

// Rounds every number in a JSON tree to kReportDigits significant digits.
// Non-finite numbers become null.
nlohmann::json rounded(const nlohmann::json& value);

struct Report {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();  // keyed by operation name
  std::vector<std::string> warnings;

  // Sorted keys, rounded numbers, two-space indent.
  std::string to_json() const;
};

}  // namespace dmlimits
